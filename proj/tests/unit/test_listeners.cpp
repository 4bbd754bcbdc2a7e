#include <doctest.h>

#include "nettask/io.hpp"
#include "nettask/listeners.hpp"
#include "tempdir.hpp"

using namespace nettask;

TEST_CASE("listener thresholds") {
    const auto log = PlayLog::aggregate(2, 3, {{0, 0, 4}, {0, 1, 5}, {1, 2, 2}, {1, 2, 3}, {1, 0, 0}});
    CHECK(log.rows.size() == 3);
    CHECK(log.rows[2] == PlayRow{1, 2, 5});
    const auto rel = derive_artist_listeners(log);
    CHECK(rel.artists_of[0] == std::vector<DimId>{1});
    CHECK(rel.artists_of[1] == std::vector<DimId>{2});
    CHECK_THROWS_AS(PlayLog::aggregate(1, 1, {{1, 0, 1}}), InputError);
}

TEST_CASE("genre labels need min_artists listened artists") {
    ListenerRelation rel;
    rel.num_artists = 10;
    rel.artists_of = {{0, 1, 2, 3}, {0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}, {}};
    const GenreMap genres{{"g", {0, 1, 2, 3, 4, 12}}, {"h", {5, 6, 7, 8, 9}}};
    std::vector<std::string> warnings;
    const auto ls = derive_genre_labels(rel, genres, kDefaultMinArtists, &warnings);
    CHECK(std::vector<std::uint8_t>(ls.at("g").labels().begin(), ls.at("g").labels().end()) ==
          std::vector<std::uint8_t>{0, 1, 0, 0});
    CHECK(ls.at("h").positive_count() == 1);
    CHECK(warnings.size() == 1);
}

TEST_CASE("raising thresholds never adds positives") {
    std::vector<PlayRow> rows;
    for (NodeId u = 0; u < 30; ++u)
        for (DimId a = 0; a < 20; ++a)
            if ((u * 7 + a * 3) % 5 < 3) rows.push_back({u, a, (u + a) % 11});
    const auto log = PlayLog::aggregate(30, 20, rows);
    GenreMap genres{{"g", {}}};
    for (DimId a = 0; a < 20; a += 2) genres["g"].push_back(a);
    std::size_t prev = 31;
    for (Count t = 1; t <= 10; ++t) {
        const auto n = derive_genre_labels(derive_artist_listeners(log, t), genres, 3).at("g").positive_count();
        CHECK(n <= prev);
        prev = n;
    }
    prev = 31;
    for (std::size_t m = 1; m <= 10; ++m) {
        const auto n = derive_genre_labels(derive_artist_listeners(log, 2), genres, m).at("g").positive_count();
        CHECK(n <= prev);
        prev = n;
    }
}

TEST_CASE("play log parsing") {
    TempDir dir("plays");
    write_file(dir / "num.tsv", "# header\n2\ta\t3\n0\tb\t1\n2\ta\t4\n");
    const auto num = parse_play_log(dir / "num.tsv");
    CHECK(num.numeric_users);
    CHECK(num.log.num_users == 3);
    CHECK(num.log.rows.size() == 2);
    CHECK(num.log.rows[1] == PlayRow{2, 0, 7});

    write_file(dir / "str.tsv", "bob\tx\t5\nann\ty\t5\nbob\ty\t1\n");
    const auto str = parse_play_log(dir / "str.tsv");
    CHECK_FALSE(str.numeric_users);
    CHECK(str.users.token(0) == "bob");
    CHECK(str.users.token(1) == "ann");

    const std::vector<std::string> order{"ann", "bob", "cy"};
    const auto ordered = parse_play_log(dir / "str.tsv", &order);
    CHECK(ordered.log.num_users == 3);
    CHECK(*ordered.users.find("bob") == 1);
    const std::vector<std::string> partial{"ann"};
    CHECK_THROWS_AS(parse_play_log(dir / "str.tsv", &partial), InputError);

    write_file(dir / "bad.tsv", "u\ta\t1\nu\ta\tlots\n");
    try {
        parse_play_log(dir / "bad.tsv");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }

    write_file(dir / "genres.tsv", "rock\tx\nrock\tx\nrock\tzzz\npop\ty\n");
    std::vector<std::string> warnings;
    const auto g = parse_genre_map(dir / "genres.tsv", str.artists, &warnings);
    CHECK(g.at("rock") == std::vector<DimId>{0});
    CHECK(g.at("pop") == std::vector<DimId>{1});
    CHECK(warnings.size() == 1);
}
