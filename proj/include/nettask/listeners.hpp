#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nettask/graph.hpp"

namespace nettask {

// Dense ids for external string tokens, in first-seen order.
class IdMap {
  public:
    std::uint32_t intern(const std::string& token);
    std::optional<std::uint32_t> find(const std::string& token) const;
    const std::string& token(std::uint32_t id) const { return tokens_[id]; }
    std::size_t size() const { return tokens_.size(); }

  private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::uint32_t> ids_;
};

struct PlayRow {
    NodeId user;
    DimId artist;
    Count plays;
    bool operator==(const PlayRow&) const = default;
};

// Aggregated (user, artist) play counts: unique pairs, plays >= 1, sorted.
struct PlayLog {
    std::size_t num_users = 0;
    std::size_t num_artists = 0;
    std::vector<PlayRow> rows;

    // Sums duplicate (user, artist) rows and drops zero counts.
    static PlayLog aggregate(std::size_t num_users, std::size_t num_artists, std::vector<PlayRow> rows);
};

// For each user, the sorted artists they are a listener of.
struct ListenerRelation {
    std::size_t num_artists = 0;
    std::vector<std::vector<DimId>> artists_of;
};

// Genre name -> sorted, duplicate-free artist ids.
using GenreMap = std::map<std::string, std::vector<DimId>>;

inline constexpr Count kDefaultMinPlays = 5;
inline constexpr std::size_t kDefaultMinArtists = 5;

// (u, a) is a listener pair iff plays(u, a) >= min_plays.
ListenerRelation derive_artist_listeners(const PlayLog& log, Count min_plays = kDefaultMinPlays);

// label(u) = 1 iff u listens to at least `min_artists` artists of the genre.
// Genre artists outside the relation's artist range are skipped and reported
// through `warnings`.
LabelSets derive_genre_labels(const ListenerRelation& listeners, const GenreMap& genres,
                              std::size_t min_artists = kDefaultMinArtists, std::vector<std::string>* warnings = nullptr);

// Text inputs for derive-labels.
//   plays:  `user<TAB>artist<TAB>plays` (tokens are arbitrary strings)
//   genres: `genre<TAB>artist`
// Users are numbered in first-seen order unless `user_order` is given; when
// every user token is a non-negative integer and no order is given, the
// integers are used directly.
struct PlayLogFile {
    PlayLog log;
    IdMap users;
    IdMap artists;
    bool numeric_users = false;
};

PlayLogFile parse_play_log(const std::filesystem::path& path, const std::vector<std::string>* user_order = nullptr);
GenreMap parse_genre_map(const std::filesystem::path& path, const IdMap& artists, std::vector<std::string>* warnings);

}  // namespace nettask
