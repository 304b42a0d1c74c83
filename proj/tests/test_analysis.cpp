#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>
#include <vector>

#include "pscan/analysis/disagreement.hpp"
#include "pscan/analysis/rank.hpp"
#include "pscan/analysis/rbo.hpp"
#include "pscan/analysis/report.hpp"
#include "pscan/analysis/topics.hpp"

namespace fs = std::filesystem;
using namespace pscan;
using namespace pscan::analysis;

namespace {

const std::string kFixtureDir = PSCAN_FIXTURE_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("pscan_analysis_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

// Independent oracle for extrapolated rank-biased overlap, written before
// the production code and kept deliberately naive: prefix overlaps are
// recomputed from scratch with set intersections at every depth, and the
// published closed form is transcribed term by term. S is the shorter list.
double rbo_ext_oracle(std::vector<std::string> a, std::vector<std::string> b, double p) {
    if (a.size() > b.size()) std::swap(a, b);
    const size_t s = a.size();
    const size_t l = b.size();

    auto overlap_at = [&](size_t depth) {
        std::set<std::string> sa(a.begin(), a.begin() + std::min(depth, s));
        std::set<std::string> sb(b.begin(), b.begin() + std::min(depth, l));
        size_t x = 0;
        for (const auto& id : sa) x += sb.count(id);
        return static_cast<double>(x);
    };

    const double xs = overlap_at(s);
    const double xl = overlap_at(l);

    double sum = 0.0;
    for (size_t d = 1; d <= l; ++d)
        sum += overlap_at(d) / static_cast<double>(d) * std::pow(p, static_cast<double>(d));
    for (size_t d = s + 1; d <= l; ++d)
        sum += (xs * static_cast<double>(d - s)) /
               (static_cast<double>(s) * static_cast<double>(d)) *
               std::pow(p, static_cast<double>(d));

    const double tail =
        ((xl - xs) / static_cast<double>(l) + xs / static_cast<double>(s)) *
        std::pow(p, static_cast<double>(l));
    return (1.0 - p) / p * sum + tail;
}

std::vector<std::string> id_list(const std::vector<int>& nums) {
    std::vector<std::string> out;
    for (int n : nums) out.push_back("S" + std::to_string(n));
    return out;
}

metrics::MetricsRow row(const std::string& subject, corpus::Setting s, size_t wc, size_t pc,
                        double npf) {
    metrics::MetricsRow r;
    r.article.subject_id = subject;
    r.article.setting = s;
    r.article.word_count = wc;
    r.article.pc = pc;
    r.article.pf_article = wc == 0 ? 0.0 : static_cast<double>(pc) / static_cast<double>(wc);
    r.npf = npf;
    return r;
}

}  // namespace

TEST_CASE("rank-biased overlap matches the direct-summation oracle") {
    SECTION("identical lists score exactly 1") {
        auto ids = id_list({1, 2, 3, 4, 5});
        CHECK(rbo(ids, ids, 0.9) == Catch::Approx(1.0).margin(1e-12));
        CHECK(rbo_ext_oracle(ids, ids, 0.9) == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("disjoint lists score exactly 0") {
        auto a = id_list({1, 2, 3});
        auto b = id_list({4, 5, 6});
        CHECK(rbo(a, b, 0.9) == 0.0);
        CHECK(rbo_ext_oracle(a, b, 0.9) == 0.0);
    }

    SECTION("random 50-item permutation pairs agree with the oracle") {
        std::mt19937 rng(1234);
        std::vector<int> base(50);
        for (int i = 0; i < 50; ++i) base[i] = i;
        for (int trial = 0; trial < 60; ++trial) {
            auto x = base, y = base;
            std::shuffle(x.begin(), x.end(), rng);
            std::shuffle(y.begin(), y.end(), rng);
            auto a = id_list(x), b = id_list(y);
            double got = rbo(a, b, 0.9);
            double want = rbo_ext_oracle(a, b, 0.9);
            CHECK(got == Catch::Approx(want).margin(1e-9));
            CHECK(got >= 0.0);
            CHECK(got <= 1.0 + 1e-12);
        }
    }

    SECTION("uneven lengths agree with the oracle") {
        std::mt19937 rng(77);
        for (int trial = 0; trial < 60; ++trial) {
            size_t na = 1 + rng() % 40, nb = 1 + rng() % 40;
            std::vector<int> pool(80);
            for (int i = 0; i < 80; ++i) pool[i] = i;
            std::shuffle(pool.begin(), pool.end(), rng);
            auto a = id_list({pool.begin(), pool.begin() + static_cast<long>(na)});
            std::shuffle(pool.begin(), pool.end(), rng);
            auto b = id_list({pool.begin(), pool.begin() + static_cast<long>(nb)});
            for (double p : {0.5, 0.9, 0.98}) {
                double got = rbo(a, b, p);
                double want = rbo_ext_oracle(a, b, p);
                CHECK(got == Catch::Approx(want).margin(1e-9));
            }
        }
    }

    SECTION("symmetry") {
        std::mt19937 rng(5);
        for (int trial = 0; trial < 40; ++trial) {
            size_t na = 1 + rng() % 20, nb = 1 + rng() % 30;
            std::vector<int> pool(60);
            for (int i = 0; i < 60; ++i) pool[i] = i;
            std::shuffle(pool.begin(), pool.end(), rng);
            auto a = id_list({pool.begin(), pool.begin() + static_cast<long>(na)});
            std::shuffle(pool.begin(), pool.end(), rng);
            auto b = id_list({pool.begin(), pool.begin() + static_cast<long>(nb)});
            CHECK(rbo(a, b, 0.9) == Catch::Approx(rbo(b, a, 0.9)).margin(1e-12));
        }
    }

    SECTION("appending a common suffix never decreases the score") {
        std::mt19937 rng(8);
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<int> pool(60);
            for (int i = 0; i < 60; ++i) pool[i] = i;
            std::shuffle(pool.begin(), pool.end(), rng);
            size_t n = 3 + rng() % 10;
            auto a = id_list({pool.begin(), pool.begin() + static_cast<long>(n)});
            std::shuffle(pool.begin(), pool.end(), rng);
            auto b = id_list({pool.begin(), pool.begin() + static_cast<long>(n)});
            double before = rbo(a, b, 0.9);
            // Fresh ids absent from both lists, appended to both.
            auto a2 = a, b2 = b;
            for (int k = 0; k < 5; ++k) {
                a2.push_back("X" + std::to_string(k));
                b2.push_back("X" + std::to_string(k));
            }
            double after = rbo(a2, b2, 0.9);
            CHECK(after >= before - 1e-12);
            CHECK(after == Catch::Approx(rbo_ext_oracle(a2, b2, 0.9)).margin(1e-9));
        }
    }

    SECTION("input validation") {
        auto ids = id_list({1, 2, 3});
        CHECK_THROWS_AS(rbo({}, ids, 0.9), DataError);
        CHECK_THROWS_AS(rbo(ids, {}, 0.9), DataError);
        CHECK_THROWS_AS(rbo({"S1", "S2", "S1"}, ids, 0.9), DataError);
        CHECK_THROWS_AS(rbo(ids, {"S4", "S4"}, 0.9), DataError);
        CHECK_THROWS_AS(rbo(ids, ids, 0.0), ConfigError);
        CHECK_THROWS_AS(rbo(ids, ids, 1.0), ConfigError);
        CHECK_THROWS_AS(rbo(ids, ids, -0.5), ConfigError);
    }
}

TEST_CASE("rankings order by score with deterministic ties") {
    using S = corpus::Setting;
    std::vector<metrics::MetricsRow> rows = {
        row("B", S::en, 100, 90, 0.9), row("A", S::en, 100, 90, 0.8),
        row("C", S::en, 100, 10, 0.1), row("D", S::en, 100, 50, 0.5),
        row("E", S::ru, 100, 99, 1.0),
    };
    // B and A tie on pf at 0.9.
    rows[1].article.pf_article = 0.9;

    SECTION("tie broken by subject id ascending") {
        auto r = rank_by_score(rows, S::en, ScoreKind::pf, 1.0);
        REQUIRE(r.entries.size() == 4);
        CHECK(r.entries[0].subject_id == "A");
        CHECK(r.entries[1].subject_id == "B");
        CHECK(r.entries[2].subject_id == "D");
        CHECK(r.entries[3].subject_id == "C");
        CHECK(r.setting == S::en);
        CHECK(r.kind == ScoreKind::pf);
    }

    SECTION("other settings never leak in") {
        auto r = rank_by_score(rows, S::ru, ScoreKind::pf, 1.0);
        REQUIRE(r.entries.size() == 1);
        CHECK(r.entries[0].subject_id == "E");
    }

    SECTION("score kinds select different columns") {
        auto by_npf = rank_by_score(rows, S::en, ScoreKind::npf, 1.0);
        CHECK(by_npf.entries[0].subject_id == "B");  // npf 0.9 beats A's 0.8
        auto by_pc = rank_by_score(rows, S::en, ScoreKind::pc, 1.0);
        CHECK(by_pc.entries[0].score == 90.0);
        auto by_len = rank_by_score(rows, S::en, ScoreKind::length, 1.0);
        CHECK(by_len.entries[0].score == 100.0);
        // All lengths tie, so length ranking is pure subject order.
        CHECK(by_len.entries[0].subject_id == "A");
        CHECK(by_len.entries[3].subject_id == "D");
    }

    SECTION("length filter drops short high scorers") {
        auto rows2 = rows;
        rows2[2].article.word_count = 10;   // C short
        rows2[2].article.pf_article = 5.0;  // but extreme pf
        auto unfiltered = rank_by_score(rows2, S::en, ScoreKind::pf, 1.0);
        CHECK(unfiltered.entries[0].subject_id == "C");
        auto filtered = rank_by_score(rows2, S::en, ScoreKind::pf, 0.25);
        // Top 25% longest of {100, 100, 10, 100}: strictly above the 75th
        // percentile word count; C is gone.
        for (const auto& e : filtered.entries) CHECK(e.subject_id != "C");
        CHECK_FALSE(filtered.entries.empty());
    }

    SECTION("empty results are errors") {
        CHECK_THROWS_AS(rank_by_score(rows, S::en2ru, ScoreKind::pf, 1.0), DataError);
        CHECK_THROWS_AS(rank_by_score({}, S::en, ScoreKind::pf, 1.0), DataError);
    }

    SECTION("ranking ids feed rbo directly") {
        auto r1 = rank_by_score(rows, S::en, ScoreKind::pf, 1.0);
        auto r2 = rank_by_score(rows, S::en, ScoreKind::npf, 1.0);
        auto ids1 = ranked_ids(r1);
        auto ids2 = ranked_ids(r2);
        CHECK(ids1.size() == 4);
        CHECK(rbo(ids1, ids1, 0.9) == Catch::Approx(1.0).margin(1e-12));
        CHECK(rbo(ids1, ids2, 0.9) ==
              Catch::Approx(rbo_ext_oracle(ids1, ids2, 0.9)).margin(1e-9));
    }
}

TEST_CASE("topic aggregation averages npf per language over mapped subjects") {
    auto topic_map = load_topic_map(kFixtureDir + "/topics.tsv");
    REQUIRE(topic_map.size() >= 11);

    using S = corpus::Setting;
    std::vector<metrics::NpfEntry> table;
    auto add = [&](const std::string& subject, S s, double npf) {
        table.push_back({subject, s, npf, npf});
    };
    add("Q9001", S::en, 0.10); add("Q9001", S::ru, 0.20);
    add("Q9002", S::en, 0.20); add("Q9002", S::ru, 0.40);
    add("Q9003", S::en, 0.30); add("Q9003", S::ru, 0.60);
    add("Q9004", S::en, 0.40); add("Q9004", S::ru, 0.80);
    add("Q9005", S::en, 0.50); add("Q9005", S::ru, 1.00);
    add("Q9006", S::en, 0.60); add("Q9006", S::ru, 0.00);
    add("Q9007", S::en, 0.80); add("Q9007", S::ru, 0.60);
    add("Q9008", S::en, 0.90); add("Q9008", S::ru, 0.10);
    add("Q9009", S::en, 0.70); add("Q9009", S::ru, 0.30);
    add("Q9010", S::en, 1.00); add("Q9010", S::ru, 0.50);

    SECTION("means per language with multi-topic membership") {
        auto agg = topic_aggregate(topic_map, table, 2);
        // With min_count 2: body_of_water {Q9002, Q9007}, human {Q9004,
        // Q9010}, building {Q9008, Q9009}; singleton topics are dropped.
        REQUIRE(agg.aggregates.size() == 3);
        std::map<std::string, TopicAggregate> by_id;
        for (const auto& t : agg.aggregates) by_id[t.topic_id] = t;
        REQUIRE(by_id.count("Q15324"));
        const auto& water = by_id["Q15324"];
        CHECK(water.label == "body of water");
        CHECK(water.subject_count == 2);
        CHECK(water.mean_npf_en == Catch::Approx(0.5).margin(1e-12));
        CHECK(water.mean_npf_ru == Catch::Approx(0.5).margin(1e-12));
        const auto& human = by_id["Q5"];
        CHECK(human.mean_npf_en == Catch::Approx(0.7).margin(1e-12));
        CHECK(human.mean_npf_ru == Catch::Approx(0.65).margin(1e-12));
        const auto& building = by_id["Q41176"];
        CHECK(building.mean_npf_en == Catch::Approx(0.8).margin(1e-12));
        CHECK(building.mean_npf_ru == Catch::Approx(0.2).margin(1e-12));
    }

    SECTION("a subject with two topics counts toward both") {
        // Q9002 also maps to river (Q4022); with min_count 1 the river
        // topic appears with exactly Q9002's scores.
        auto agg = topic_aggregate(topic_map, table, 1);
        bool found = false;
        for (const auto& t : agg.aggregates) {
            if (t.topic_id != "Q4022") continue;
            found = true;
            CHECK(t.subject_count == 1);
            CHECK(t.mean_npf_en == Catch::Approx(0.20).margin(1e-12));
            CHECK(t.mean_npf_ru == Catch::Approx(0.40).margin(1e-12));
        }
        CHECK(found);
    }

    SECTION("min_count filters small topics") {
        auto agg = topic_aggregate(topic_map, table, 3);
        CHECK(agg.aggregates.empty());
    }

    SECTION("unmapped subjects are reported, not fatal") {
        add("Q9999", S::en, 0.5);
        auto agg = topic_aggregate(topic_map, table, 2);
        REQUIRE(agg.unmapped.size() == 1);
        CHECK(agg.unmapped[0] == "Q9999");
        CHECK(agg.aggregates.size() == 3);
    }

    SECTION("topic means stay within member extremes") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<metrics::NpfEntry> t2;
            std::map<std::string, std::pair<double, double>> extent;
            for (int i = 1; i <= 10; ++i) {
                std::string subject = "Q900" + std::to_string(i % 10);
                double v = dist(rng);
                t2.push_back({subject, i % 2 ? S::en : S::ru, v, v});
            }
            auto agg = topic_aggregate(topic_map, t2, 1);
            for (const auto& topic : agg.aggregates) {
                double lo = 2.0, hi = -1.0;
                for (const auto& e : t2) {
                    bool member = false;
                    for (const auto& mrow : topic_map)
                        if (mrow.subject_id == e.subject_id && mrow.topic_id == topic.topic_id)
                            member = true;
                    if (!member) continue;
                    lo = std::min(lo, e.npf);
                    hi = std::max(hi, e.npf);
                }
                if (topic.subject_count == 0) continue;
                if (topic.mean_npf_en >= 0.0) {
                    CHECK(topic.mean_npf_en >= lo - 1e-12);
                    CHECK(topic.mean_npf_en <= hi + 1e-12);
                }
                if (topic.mean_npf_ru >= 0.0) {
                    CHECK(topic.mean_npf_ru >= lo - 1e-12);
                    CHECK(topic.mean_npf_ru <= hi + 1e-12);
                }
            }
        }
    }

    SECTION("malformed topic maps are rejected") {
        TempDir tmp;
        auto bad = [&](const std::string& name, const std::string& body) {
            atomic_write_file(tmp.file(name), body);
            CHECK_THROWS_AS(load_topic_map(tmp.file(name)), DataError);
        };
        bad("nohdr.tsv", "Q1\tQ5\thuman\n");
        bad("cols.tsv", "subject_id\ttopic_id\tlabel\nQ1\tQ5\n");
        bad("dup.tsv", "subject_id\ttopic_id\tlabel\nQ1\tQ5\thuman\nQ1\tQ5\thuman\n");
        bad("empty_field.tsv", "subject_id\ttopic_id\tlabel\nQ1\t\thuman\n");
    }
}

TEST_CASE("disagreement sorts paired articles by absolute delta") {
    using S = corpus::Setting;
    auto pf_row = [](const std::string& subject, S s, double pf) {
        metrics::ArticleMetrics a;
        a.subject_id = subject;
        a.setting = s;
        a.word_count = 100;
        a.pc = static_cast<size_t>(pf * 100);
        a.pf_article = pf;
        return a;
    };

    SECTION("signs point at the more persuasive language") {
        auto report = disagreement({pf_row("A", S::ru, 0.8), pf_row("A", S::en, 0.2),
                                    pf_row("B", S::ru, 0.3), pf_row("B", S::en, 0.3),
                                    pf_row("C", S::ru, 0.1), pf_row("C", S::en, 0.5)});
        REQUIRE(report.rows.size() == 3);
        CHECK(report.rows[0].subject_id == "A");
        CHECK(report.rows[0].delta == Catch::Approx(0.6).margin(1e-12));
        CHECK(report.rows[1].subject_id == "C");
        CHECK(report.rows[1].delta == Catch::Approx(-0.4).margin(1e-12));
        CHECK(report.rows[2].subject_id == "B");
        CHECK(report.rows[2].delta == 0.0);
        CHECK(report.warnings.empty());
    }

    SECTION("missing counterparts are skipped with a warning") {
        auto report = disagreement({pf_row("A", S::ru, 0.8), pf_row("A", S::en, 0.2),
                                    pf_row("B", S::ru, 0.3)});
        REQUIRE(report.rows.size() == 1);
        CHECK(report.rows[0].subject_id == "A");
        REQUIRE(report.warnings.size() == 1);
        CHECK(report.warnings[0].find("B") != std::string::npos);
    }

    SECTION("only base-language rows participate") {
        auto report = disagreement({pf_row("A", S::ru, 0.8), pf_row("A", S::en, 0.2),
                                    pf_row("A", S::en2ru, 0.99), pf_row("A", S::ru2en, 0.01)});
        REQUIRE(report.rows.size() == 1);
        CHECK(report.rows[0].pf_ru == Catch::Approx(0.8));
        CHECK(report.rows[0].pf_en == Catch::Approx(0.2));
    }

    SECTION("random fixture matches a brute-force sort oracle") {
        std::mt19937 rng(21);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        std::vector<metrics::ArticleMetrics> rows;
        std::vector<std::pair<double, std::string>> oracle;  // (|delta|, subject)
        for (int i = 0; i < 100; ++i) {
            std::string subject = "S" + std::to_string(1000 + i);
            double ru = dist(rng), en = dist(rng);
            rows.push_back(pf_row(subject, S::ru, ru));
            rows.push_back(pf_row(subject, S::en, en));
            oracle.emplace_back(std::abs(ru - en), subject);
        }
        std::sort(oracle.begin(), oracle.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        auto report = disagreement(rows);
        REQUIRE(report.rows.size() == 100);
        for (size_t i = 0; i < 100; ++i) CHECK(report.rows[i].subject_id == oracle[i].second);
    }
}

TEST_CASE("reports render byte-stable files") {
    TempDir tmp;
    using S = corpus::Setting;

    SECTION("ranking csv and structured text") {
        Ranking r;
        r.setting = S::ru;
        r.kind = ScoreKind::pf;
        r.entries = {{"A", 0.982}, {"B", 0.5}};
        auto p1 = tmp.file("rank.csv");
        emit_ranking(p1, r, ReportFormat::csv);
        CHECK(read_file(p1) ==
              "rank,subject_id,score\n"
              "1,A,0.982000\n"
              "2,B,0.500000\n");
        auto p2 = tmp.file("rank.txt");
        emit_ranking(p2, r, ReportFormat::structured_text);
        auto body = read_file(p2);
        CHECK(body.find("# ranking setting=ru kind=pf") == 0);
        CHECK(body.find("1\tA\t0.982000\n") != std::string::npos);

        emit_ranking(tmp.file("rank_again.csv"), r, ReportFormat::csv);
        CHECK(read_file(tmp.file("rank_again.csv")) == read_file(p1));
    }

    SECTION("empty ranking writes a header-only file") {
        Ranking r;
        r.setting = S::en;
        r.kind = ScoreKind::npf;
        emit_ranking(tmp.file("empty.csv"), r, ReportFormat::csv);
        CHECK(read_file(tmp.file("empty.csv")) == "rank,subject_id,score\n");
    }

    SECTION("topics csv") {
        std::vector<TopicAggregate> agg = {
            {"Q180684", "disagreement situation", 65, 0.326, 0.303},
            {"Q5", "human", 52, 0.5, 0.25},
        };
        emit_topics(tmp.file("topics.csv"), agg, ReportFormat::csv);
        CHECK(read_file(tmp.file("topics.csv")) ==
              "topic_id,label,subjects,npf_en,npf_ru\n"
              "Q180684,disagreement situation,65,0.326000,0.303000\n"
              "Q5,human,52,0.500000,0.250000\n");
    }

    SECTION("disagreement csv plus scatter section in text form") {
        DisagreementReport report;
        report.rows = {{"A", 0.8, 0.2, 0.6}, {"B", 0.3, 0.3, 0.0}};
        emit_disagreement(tmp.file("dis.csv"), report, ReportFormat::csv);
        CHECK(read_file(tmp.file("dis.csv")) ==
              "subject_id,pf_ru,pf_en,delta\n"
              "A,0.800000,0.200000,0.600000\n"
              "B,0.300000,0.300000,0.000000\n");

        std::vector<metrics::NpfEntry> scatter = {
            {"A", S::ru, 0.8, 0.9}, {"A", S::en, 0.2, 0.1},
            {"B", S::ru, 0.3, 0.4}, {"B", S::en, 0.3, 0.35},
        };
        emit_disagreement(tmp.file("dis.txt"), report, ReportFormat::structured_text,
                          &scatter);
        auto body = read_file(tmp.file("dis.txt"));
        CHECK(body.find("# disagreement") == 0);
        CHECK(body.find("# scatter npf_ru vs npf_en") != std::string::npos);
        CHECK(body.find("A\t0.900000\t0.100000\n") != std::string::npos);
        CHECK(body.find("B\t0.400000\t0.350000\n") != std::string::npos);
    }

    SECTION("unwritable paths are errors") {
        Ranking r;
        r.setting = S::en;
        r.kind = ScoreKind::pf;
        // A regular file where a directory would have to be: unwritable.
        atomic_write_file(tmp.file("blocker"), "x");
        CHECK_THROWS_AS(emit_ranking(tmp.file("blocker") + "/x.csv", r, ReportFormat::csv),
                        DataError);
    }
}
