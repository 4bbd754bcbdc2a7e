#include "nettask/listeners.hpp"

#include <algorithm>
#include <charconv>

#include "nettask/io.hpp"

namespace nettask {

std::uint32_t IdMap::intern(const std::string& token) {
    auto [it, fresh] = ids_.emplace(token, static_cast<std::uint32_t>(tokens_.size()));
    if (fresh) tokens_.push_back(token);
    return it->second;
}

std::optional<std::uint32_t> IdMap::find(const std::string& token) const {
    auto it = ids_.find(token);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

PlayLog PlayLog::aggregate(std::size_t num_users, std::size_t num_artists, std::vector<PlayRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const PlayRow& a, const PlayRow& b) {
        return a.user != b.user ? a.user < b.user : a.artist < b.artist;
    });
    PlayLog log;
    log.num_users = num_users;
    log.num_artists = num_artists;
    for (const auto& r : rows) {
        if (r.user >= num_users || r.artist >= num_artists) throw InputError("play row out of range");
        if (r.plays == 0) continue;
        if (!log.rows.empty() && log.rows.back().user == r.user && log.rows.back().artist == r.artist) {
            log.rows.back().plays += r.plays;
        } else {
            log.rows.push_back(r);
        }
    }
    return log;
}

ListenerRelation derive_artist_listeners(const PlayLog& log, Count min_plays) {
    ListenerRelation rel;
    rel.num_artists = log.num_artists;
    rel.artists_of.resize(log.num_users);
    for (const auto& r : log.rows)
        if (r.plays >= min_plays) rel.artists_of[r.user].push_back(r.artist);
    for (auto& a : rel.artists_of) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return rel;
}

LabelSets derive_genre_labels(const ListenerRelation& listeners, const GenreMap& genres, std::size_t min_artists,
                              std::vector<std::string>* warnings) {
    LabelSets out;
    for (const auto& [name, artists] : genres) {
        std::vector<DimId> known;
        known.reserve(artists.size());
        std::size_t unknown = 0;
        for (DimId a : artists) {
            if (a < listeners.num_artists) {
                known.push_back(a);
            } else {
                ++unknown;
            }
        }
        if (unknown && warnings)
            warnings->push_back("genre '" + name + "': " + std::to_string(unknown) + " unknown artist(s) skipped");
        std::sort(known.begin(), known.end());
        known.erase(std::unique(known.begin(), known.end()), known.end());

        std::vector<std::uint8_t> labels(listeners.artists_of.size(), 0);
        for (std::size_t u = 0; u < labels.size(); ++u) {
            const auto& mine = listeners.artists_of[u];
            std::size_t hits = 0;
            // Sorted-set intersection count.
            auto a = mine.begin();
            auto b = known.begin();
            while (a != mine.end() && b != known.end()) {
                if (*a < *b) {
                    ++a;
                } else if (*b < *a) {
                    ++b;
                } else {
                    ++hits;
                    ++a;
                    ++b;
                }
            }
            labels[u] = hits >= min_artists ? 1 : 0;
        }
        out.emplace(name, LabelSet(name, std::move(labels)));
    }
    return out;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto tab = line.find('\t', start);
        out.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return out;
}

template <typename Fn>
void for_each_row(const std::filesystem::path& path, Fn&& fn) {
    const std::string text = read_file(path);
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        std::string line = text.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
        start = nl == std::string::npos ? text.size() : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        fn(line_no, split_tabs(line));
    }
}

std::optional<std::uint64_t> as_uint(const std::string& s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

PlayLogFile parse_play_log(const std::filesystem::path& path, const std::vector<std::string>* user_order) {
    struct Raw {
        std::string user;
        std::string artist;
        Count plays;
    };
    std::vector<Raw> raw;
    for_each_row(path, [&](std::size_t line, const std::vector<std::string>& f) {
        if (f.size() != 3) throw ParseError(path.string(), line, "expected user<TAB>artist<TAB>plays");
        auto plays = as_uint(f[2]);
        if (!plays) throw ParseError(path.string(), line, "invalid play count '" + f[2] + "'");
        if (f[0].empty() || f[1].empty()) throw ParseError(path.string(), line, "empty user or artist token");
        raw.push_back({f[0], f[1], *plays});
    });

    PlayLogFile out;
    std::vector<PlayRow> rows;
    rows.reserve(raw.size());
    if (user_order) {
        for (const auto& u : *user_order) out.users.intern(u);
    } else {
        out.numeric_users = !raw.empty() && std::all_of(raw.begin(), raw.end(), [](const Raw& r) { return as_uint(r.user).has_value(); });
    }
    std::size_t num_users = 0;
    for (const auto& r : raw) {
        NodeId u;
        if (user_order) {
            auto id = out.users.find(r.user);
            if (!id) throw InputError("user '" + r.user + "' is not in the user order file");
            u = *id;
        } else if (out.numeric_users) {
            u = static_cast<NodeId>(*as_uint(r.user));
        } else {
            u = out.users.intern(r.user);
        }
        num_users = std::max<std::size_t>(num_users, std::size_t{u} + 1);
        rows.push_back({u, out.artists.intern(r.artist), r.plays});
    }
    if (user_order) num_users = out.users.size();
    if (!user_order && out.numeric_users)
        for (std::size_t u = 0; u < num_users; ++u) out.users.intern(std::to_string(u));
    out.log = PlayLog::aggregate(num_users, out.artists.size(), std::move(rows));
    return out;
}

GenreMap parse_genre_map(const std::filesystem::path& path, const IdMap& artists, std::vector<std::string>* warnings) {
    GenreMap genres;
    std::map<std::string, std::size_t> unknown;
    for_each_row(path, [&](std::size_t line, const std::vector<std::string>& f) {
        if (f.size() != 2 || f[0].empty()) throw ParseError(path.string(), line, "expected genre<TAB>artist");
        auto& set = genres[f[0]];
        if (auto id = artists.find(f[1])) {
            set.push_back(*id);
        } else {
            ++unknown[f[0]];
        }
    });
    for (auto& [name, set] : genres) {
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
    }
    if (warnings)
        for (const auto& [name, n] : unknown)
            warnings->push_back("genre '" + name + "': " + std::to_string(n) + " artist(s) never played, skipped");
    return genres;
}

}  // namespace nettask
