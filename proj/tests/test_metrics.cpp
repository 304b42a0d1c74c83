#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "pscan/corpus/paired.hpp"
#include "pscan/detect/pipeline.hpp"
#include "pscan/hlq/builtin.hpp"
#include "pscan/metrics/metrics.hpp"
#include "pscan/text/tokenizer.hpp"

namespace fs = std::filesystem;
using namespace pscan;
using namespace pscan::metrics;

namespace {

const std::string kFixtureDir = PSCAN_FIXTURE_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("pscan_metrics_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

detect::PersuasiveTextSet make_pts(const detect::ParagraphRef& ref,
                                   const std::vector<std::string>& texts) {
    detect::PersuasiveTextSet pts;
    pts.ref = ref;
    for (const auto& t : texts) pts.entries.push_back({t, {"Q20"}, true});
    return pts;
}

corpus::Paragraph make_para(size_t index, std::string text) {
    corpus::Paragraph p;
    p.index = index;
    p.word_count = text::word_count(text);
    p.text = std::move(text);
    return p;
}

ArticleMetrics art(const std::string& subject, corpus::Setting s, double pf) {
    ArticleMetrics a;
    a.subject_id = subject;
    a.setting = s;
    a.word_count = 100;
    a.pc = static_cast<size_t>(pf * 100);
    a.pf_article = pf;
    return a;
}

}  // namespace

TEST_CASE("persuasive count sums words over the set") {
    detect::ParagraphRef ref{"S1", corpus::Setting::en, 0};

    SECTION("empty set counts zero") { CHECK(pc(make_pts(ref, {})) == 0); }

    SECTION("counts agree with the frozen tokenizer") {
        REQUIRE(text::word_count("fire engulfed") == 2);
        REQUIRE(text::word_count("tragedy") == 1);
        CHECK(pc(make_pts(ref, {"fire engulfed", "tragedy"})) == 3);
    }

    SECTION("permutation of entries cannot change the count") {
        auto a = make_pts(ref, {"fire engulfed", "tragedy", "the whole town"});
        auto b = make_pts(ref, {"the whole town", "fire engulfed", "tragedy"});
        CHECK(pc(a) == pc(b));
    }

    SECTION("a set equal to the whole paragraph saturates pf at exactly 1") {
        auto para = make_para(0, "Fire engulfed the town");
        REQUIRE(para.word_count == 4);
        auto pts = make_pts(ref, {detect::normalize_span(para.text)});
        auto m = paragraph_metrics(pts, para);
        CHECK(m.pc == 4);
        CHECK(m.pf == 1.0);
        CHECK_FALSE(m.pf_exceeds_one);
    }
}

TEST_CASE("paragraph frequency is count over length") {
    detect::ParagraphRef ref{"S1", corpus::Setting::en, 0};

    SECTION("plain arithmetic") {
        corpus::Paragraph para;
        para.index = 0;
        para.text = "ignored";
        para.word_count = 20;
        auto pts = make_pts(ref, {"one two three four five"});
        REQUIRE(pc(pts) == 5);
        auto m = paragraph_metrics(pts, para);
        CHECK(m.pf == 0.25);
    }

    SECTION("no spans means zero frequency") {
        auto para = make_para(0, "Nothing persuasive in this sentence at all");
        auto m = paragraph_metrics(make_pts(ref, {}), para);
        CHECK(m.pc == 0);
        CHECK(m.pf == 0.0);
    }

    SECTION("overlapping spans can push pf past 1, flagged not clamped") {
        auto para = make_para(0, "Fire engulfed the town");
        auto pts = make_pts(ref, {"fire engulfed the town", "engulfed the town"});
        auto m = paragraph_metrics(pts, para);
        CHECK(m.pc == 7);
        CHECK(m.word_count == 4);
        CHECK(m.pf == Catch::Approx(1.75));
        CHECK(m.pf_exceeds_one);
    }

    SECTION("zero-word paragraphs cannot be scored") {
        corpus::Paragraph para;
        para.word_count = 0;
        CHECK_THROWS_AS(paragraph_metrics(make_pts(ref, {}), para), DataError);
    }
}

TEST_CASE("article frequency is the weighted mean of paragraph frequencies") {
    auto pm = [](const std::string& subject, corpus::Setting s, size_t idx, size_t pc_val,
                 size_t wc) {
        ParagraphMetrics m;
        m.ref = {subject, s, idx};
        m.pc = pc_val;
        m.word_count = wc;
        m.pf = static_cast<double>(pc_val) / static_cast<double>(wc);
        m.pf_exceeds_one = pc_val > wc;
        return m;
    };

    SECTION("forced arithmetic") {
        auto a = article_metrics({pm("S1", corpus::Setting::en, 0, 2, 10),
                                  pm("S1", corpus::Setting::en, 1, 15, 30)});
        CHECK(a.pf_article == Catch::Approx(0.425).margin(1e-15));
        CHECK(a.word_count == 40);
        CHECK(a.pc == 17);
    }

    SECTION("single paragraph article inherits its pf") {
        auto a = article_metrics({pm("S1", corpus::Setting::ru, 0, 3, 12)});
        CHECK(a.pf_article == Catch::Approx(0.25).margin(1e-15));
        CHECK(a.setting == corpus::Setting::ru);
    }

    SECTION("mixed articles are rejected") {
        CHECK_THROWS_AS(article_metrics({pm("S1", corpus::Setting::en, 0, 1, 10),
                                         pm("S2", corpus::Setting::en, 1, 1, 10)}),
                        DataError);
        CHECK_THROWS_AS(article_metrics({pm("S1", corpus::Setting::en, 0, 1, 10),
                                         pm("S1", corpus::Setting::ru, 1, 1, 10)}),
                        DataError);
        CHECK_THROWS_AS(article_metrics({}), DataError);
    }

    SECTION("weighted mean equals total count over total length on random inputs") {
        std::mt19937 rng(99);
        for (int trial = 0; trial < 300; ++trial) {
            std::vector<ParagraphMetrics> paras;
            size_t total_pc = 0, total_wc = 0;
            size_t n = 1 + rng() % 12;
            for (size_t i = 0; i < n; ++i) {
                size_t wc = 1 + rng() % 400;
                size_t cnt = rng() % (3 * wc);
                total_pc += cnt;
                total_wc += wc;
                paras.push_back(pm("S", corpus::Setting::en2ru, i, cnt, wc));
            }
            auto a = article_metrics(paras);
            double direct =
                static_cast<double>(total_pc) / static_cast<double>(total_wc);
            CHECK(a.pf_article == Catch::Approx(direct).margin(1e-12));
        }
    }
}

TEST_CASE("joint normalization scales both languages together") {
    using S = corpus::Setting;

    SECTION("hand-evaluated scaling") {
        auto scores = normalize_pf({art("A", S::en, 0.05), art("B", S::en, 0.6)},
                                   {art("A", S::ru, 0.1), art("B", S::ru, 0.3)});
        CHECK(scores.min_pf == 0.05);
        CHECK(scores.max_pf == 0.6);
        REQUIRE(scores.first.size() == 2);
        REQUIRE(scores.second.size() == 2);
        CHECK(scores.first[0].npf == 0.0);
        CHECK(scores.first[1].npf == 1.0);
        CHECK(scores.second[0].npf == Catch::Approx(1.0 / 11).margin(1e-12));
        CHECK(scores.second[1].npf == Catch::Approx(5.0 / 11).margin(1e-12));
    }

    SECTION("global extremes map to exactly 0 and 1") {
        auto scores = normalize_pf({art("A", S::en, 0.2), art("B", S::en, 0.9)},
                                   {art("C", S::ru, 0.4)});
        CHECK(scores.first[0].npf == 0.0);
        CHECK(scores.first[1].npf == 1.0);
    }

    SECTION("all equal but one") {
        auto scores = normalize_pf({art("A", S::en, 0.3), art("B", S::en, 0.3)},
                                   {art("C", S::ru, 0.3), art("D", S::ru, 0.7)});
        CHECK(scores.first[0].npf == 0.0);
        CHECK(scores.first[1].npf == 0.0);
        CHECK(scores.second[0].npf == 0.0);
        CHECK(scores.second[1].npf == 1.0);
    }

    SECTION("an empty side is fine as long as two articles exist") {
        auto scores = normalize_pf({}, {art("A", S::ru, 0.1), art("B", S::ru, 0.2)});
        CHECK(scores.first.empty());
        CHECK(scores.second[0].npf == 0.0);
        CHECK(scores.second[1].npf == 1.0);
    }

    SECTION("degenerate inputs are loud errors") {
        CHECK_THROWS_WITH(
            normalize_pf({art("A", S::en, 0.3)}, {art("B", S::ru, 0.3)}),
            Catch::Matchers::ContainsSubstring("degenerate normalization"));
        CHECK_THROWS_AS(normalize_pf({art("A", S::en, 0.3)}, {}), DataError);
        CHECK_THROWS_AS(normalize_pf({}, {}), DataError);
    }

    SECTION("order preserving and extreme attaining on random inputs") {
        std::mt19937 rng(41);
        std::uniform_real_distribution<double> dist(0.0, 1.5);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<ArticleMetrics> a, b;
            size_t na = rng() % 6, nb = 2 + rng() % 6;
            for (size_t i = 0; i < na; ++i)
                a.push_back(art("A" + std::to_string(i), S::en, dist(rng)));
            for (size_t i = 0; i < nb; ++i)
                b.push_back(art("B" + std::to_string(i), S::ru, dist(rng)));
            NormalizedScores scores;
            try {
                scores = normalize_pf(a, b);
            } catch (const DataError&) {
                continue;  // astronomically unlikely equal doubles
            }
            std::vector<NpfEntry> all = scores.first;
            all.insert(all.end(), scores.second.begin(), scores.second.end());
            double lo = 2.0, hi = -1.0;
            for (const auto& e : all) {
                CHECK(e.npf >= 0.0);
                CHECK(e.npf <= 1.0);
                lo = std::min(lo, e.npf);
                hi = std::max(hi, e.npf);
            }
            CHECK(lo == 0.0);
            CHECK(hi == 1.0);
            for (const auto& x : all)
                for (const auto& y : all)
                    if (x.pf < y.pf) CHECK(x.npf < y.npf);
        }
    }
}

TEST_CASE("corpus metrics join the PTS store onto the corpus") {
    corpus::ArticlePair pair;
    pair.subject_id = "S1";
    corpus::Article en;
    en.subject_id = "S1";
    en.setting = corpus::Setting::en;
    en.paragraphs = {make_para(0, "Fire engulfed the town"),
                     make_para(1, "A quiet week followed the fire")};
    corpus::Article ru;
    ru.subject_id = "S1";
    ru.setting = corpus::Setting::ru;
    ru.paragraphs = {make_para(0, "Огонь охватил город")};
    pair.articles[corpus::Setting::en] = en;
    pair.articles[corpus::Setting::ru] = ru;

    detect::ParagraphRef r0{"S1", corpus::Setting::en, 0};
    detect::ParagraphRef r1{"S1", corpus::Setting::en, 1};
    detect::ParagraphRef r2{"S1", corpus::Setting::ru, 0};

    SECTION("happy path produces canonical per-article groups") {
        auto m = compute_corpus_metrics(
            {pair}, {make_pts(r0, {"fire engulfed"}), make_pts(r1, {}), make_pts(r2, {"огонь"})});
        REQUIRE(m.paragraphs.size() == 3);
        REQUIRE(m.articles.size() == 2);
        CHECK(m.warnings.empty());
        CHECK(m.articles[0].setting == corpus::Setting::en);
        CHECK(m.articles[0].pc == 2);
        CHECK(m.articles[0].word_count == 10);
        CHECK(m.articles[0].pf_article == Catch::Approx(0.2).margin(1e-15));
        CHECK(m.articles[1].setting == corpus::Setting::ru);
        CHECK(m.articles[1].pc == 1);
    }

    SECTION("a missing PTS row is an error") {
        CHECK_THROWS_WITH(compute_corpus_metrics({pair}, {make_pts(r0, {}), make_pts(r1, {})}),
                          Catch::Matchers::ContainsSubstring("no PTS row"));
    }

    SECTION("a duplicate PTS row is an error") {
        CHECK_THROWS_WITH(
            compute_corpus_metrics({pair}, {make_pts(r0, {}), make_pts(r0, {}),
                                            make_pts(r1, {}), make_pts(r2, {})}),
            Catch::Matchers::ContainsSubstring("duplicate PTS row"));
    }

    SECTION("zero-word paragraphs are skipped with a warning") {
        auto broken = pair;
        corpus::Paragraph empty_para;
        empty_para.index = 2;
        empty_para.text = "";
        empty_para.word_count = 0;
        broken.articles[corpus::Setting::en].paragraphs.push_back(empty_para);
        auto m = compute_corpus_metrics(
            {broken}, {make_pts(r0, {}), make_pts(r1, {}), make_pts(r2, {})});
        REQUIRE(m.warnings.size() == 1);
        CHECK(m.warnings[0].find("S1/en/2") != std::string::npos);
        CHECK(m.paragraphs.size() == 3);
    }
}

TEST_CASE("metrics table renders six decimal places") {
    TempDir tmp;
    CorpusMetrics m;
    ParagraphMetrics p;
    p.ref = {"S1", corpus::Setting::en, 0};
    p.pc = 1;
    p.word_count = 3;
    p.pf = 1.0 / 3.0;
    m.paragraphs.push_back(p);
    ArticleMetrics a;
    a.subject_id = "S1";
    a.setting = corpus::Setting::en;
    a.word_count = 3;
    a.pc = 1;
    a.pf_article = 1.0 / 3.0;
    m.articles.push_back(a);
    ArticleMetrics b = a;
    b.subject_id = "S1";
    b.setting = corpus::Setting::ru;
    b.word_count = 4;
    b.pc = 6;
    b.pf_article = 1.5;
    m.articles.push_back(b);
    ParagraphMetrics pb;
    pb.ref = {"S1", corpus::Setting::ru, 0};
    pb.pc = 6;
    pb.word_count = 4;
    pb.pf = 1.5;
    pb.pf_exceeds_one = true;
    m.paragraphs.push_back(pb);

    auto scores = normalize_pf({m.articles[0]}, {m.articles[1]});
    auto rows = assemble_metrics_rows(m, scores);
    auto path = tmp.file("metrics.csv");
    write_metrics_csv(path, rows);
    CHECK(read_file(path) ==
          "subject_id,setting,wc,pc,pf,npf,flags\n"
          "S1,en,3,1,0.333333,0.000000,\n"
          "S1,ru,4,6,1.500000,1.000000,pf_gt_1;paragraph_pf_gt_1\n");

    SECTION("an article missing from normalization is an error") {
        ArticleMetrics c = a;
        c.subject_id = "S2";
        m.articles.push_back(c);
        CHECK_THROWS_WITH(assemble_metrics_rows(m, scores),
                          Catch::Matchers::ContainsSubstring("missing from normalization"));
    }
}

TEST_CASE("metrics flow end to end from a pipeline run") {
    TempDir tmp;
    auto catalog = gateway::builtin_prompt_catalog();
    auto mock = std::make_shared<gateway::MockProvider>();
    gateway::ProviderConfig cfg;
    cfg.retry.backoff_base_ms = 1;
    gateway::Gateway gw(mock, cfg, tmp.file("cache"));

    auto corpus_data = corpus::load_paired_corpus(kFixtureDir + "/paired_corpus.jsonl");
    auto actives = hlq::builtin_repository().active_questions();
    auto result =
        detect::run_pipeline(gw, catalog, corpus_data.pairs, actives, tmp.file("run"));

    std::vector<detect::PersuasiveTextSet> rows;
    for (const auto& rec : detect::load_jsonl_store(result.pts_store))
        rows.push_back(detect::pts_row_from_json(rec));

    auto m = compute_corpus_metrics(corpus_data.pairs, rows);
    CHECK(m.paragraphs.size() == 88);
    CHECK(m.articles.size() == 20);
    CHECK(m.warnings.empty());

    // Spot-check one paragraph against an independent recount of its row.
    const auto& probe = m.paragraphs.front();
    for (const auto& r : rows) {
        if (!(r.ref == probe.ref)) continue;
        size_t recount = 0;
        for (const auto& e : r.entries) recount += text::tokenize(e.text).size();
        CHECK(probe.pc == recount);
    }

    // Group by text language and normalize jointly.
    std::vector<ArticleMetrics> en_side, ru_side;
    for (const auto& a : m.articles)
        (corpus::text_language(a.setting) == corpus::Language::en ? en_side : ru_side)
            .push_back(a);
    auto scores = normalize_pf(en_side, ru_side);
    auto table_rows = assemble_metrics_rows(m, scores);
    CHECK(table_rows.size() == 20);
    write_metrics_csv(tmp.file("metrics.csv"), table_rows);
    auto body = read_file(tmp.file("metrics.csv"));
    CHECK(std::count(body.begin(), body.end(), '\n') == 21);
}
