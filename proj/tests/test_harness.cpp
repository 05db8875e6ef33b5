#include <doctest.h>

#include <random>

#include "somcheck/errors.hpp"
#include "somcheck/harness.hpp"

using namespace somcheck;

namespace {

DefectReport report(DefectType t) {
    DefectReport r;
    r.defect_type = t;
    return r;
}

std::vector<AppVerdict> verdicts_from(const std::vector<int>& truth,
                                      const std::vector<int>& pred) {
    std::vector<AppVerdict> v;
    for (std::size_t i = 0; i < truth.size(); ++i)
        v.push_back({"app" + std::to_string(i), truth[i] != 0, pred[i] != 0});
    return v;
}

}  // namespace

TEST_CASE("percent formatting rounds half up to two decimals") {
    CHECK(format_pct(0.1) == "10.00");
    CHECK(format_pct(1.0 / 9.0) == "11.11");
    CHECK(format_pct(0.719662) == "71.97");
    CHECK(format_pct(0.0) == "0.00");
    CHECK(format_pct(0.123456) == "12.35");
    CHECK(format_pct(1.0) == "100.00");
}

TEST_CASE("app verdicts follow the any-defect rule") {
    std::map<std::string, std::vector<std::vector<DefectReport>>> by_app;
    by_app["clean"] = {{report(DefectType::Normal)}, {report(DefectType::Normal)}};
    std::vector<std::vector<DefectReport>> many(100, {report(DefectType::Normal)});
    many[42] = {report(DefectType::TextOverlap)};
    by_app["one_hit"] = many;
    by_app["multi"] = {{report(DefectType::MissingImage),
                        report(DefectType::TextTruncationSide)}};
    std::map<std::string, bool> truth = {
        {"clean", false}, {"one_hit", true}, {"multi", true}};

    auto v = app_level_verdicts(by_app, truth);
    REQUIRE(v.size() == 3);
    std::map<std::string, AppVerdict> m;
    for (const auto& a : v) m[a.app_id] = a;
    CHECK_FALSE(m["clean"].predicted_label);
    CHECK(m["one_hit"].predicted_label);
    CHECK(m["multi"].predicted_label);
    CHECK_FALSE(m["clean"].truth_label);
    CHECK(m["one_hit"].truth_label);

    truth.erase("multi");
    CHECK_THROWS_AS(app_level_verdicts(by_app, truth), MissingTruth);
}

TEST_CASE("one miss of nine positives gives an 11.11% miss rate") {
    auto v = verdicts_from({1, 1, 1, 1, 1, 1, 1, 1, 1},
                           {1, 1, 1, 0, 1, 1, 1, 1, 1});
    auto r = fpr_fnr(v);
    REQUIRE(r.fnr.has_value());
    CHECK(format_pct(*r.fnr) == "11.11");
    CHECK_FALSE(r.fpr.has_value());  // no negative apps
}

TEST_CASE("one flag of ten negatives gives a 10.00% false-alarm rate") {
    auto v = verdicts_from({0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                           {0, 1, 0, 0, 0, 0, 0, 0, 0, 0});
    auto r = fpr_fnr(v);
    REQUIRE(r.fpr.has_value());
    CHECK(format_pct(*r.fpr) == "10.00");
    CHECK_FALSE(r.fnr.has_value());  // no positive apps
}

TEST_CASE("perfect predictions give zero rates") {
    auto r = fpr_fnr(verdicts_from({1, 0, 1, 0}, {1, 0, 1, 0}));
    CHECK(r.fpr == 0.0);
    CHECK(r.fnr == 0.0);
}

TEST_CASE("rates match brute-force confusion counts on random vectors") {
    std::mt19937_64 rng(31337);
    for (int iter = 0; iter < 500; ++iter) {
        int n = 1 + int(rng() % 40);
        std::vector<int> t(n), p(n);
        for (int i = 0; i < n; ++i) {
            t[i] = int(rng() % 2);
            p[i] = int(rng() % 2);
        }
        long fp = 0, tn = 0, fn = 0, tp = 0;
        for (int i = 0; i < n; ++i) {
            if (t[i] && p[i]) ++tp;
            if (t[i] && !p[i]) ++fn;
            if (!t[i] && p[i]) ++fp;
            if (!t[i] && !p[i]) ++tn;
        }
        auto r = fpr_fnr(verdicts_from(t, p));
        if (fp + tn == 0) {
            CHECK_FALSE(r.fpr.has_value());
        } else {
            REQUIRE(r.fpr.has_value());
            CHECK(*r.fpr == doctest::Approx(double(fp) / double(fp + tn)));
        }
        if (tp + fn == 0) {
            CHECK_FALSE(r.fnr.has_value());
        } else {
            REQUIRE(r.fnr.has_value());
            CHECK(*r.fnr == doctest::Approx(double(fn) / double(tp + fn)));
        }
    }
}

TEST_CASE("published occlusion precision and recall give the published F1") {
    // Feed synthetic counts that produce P = 87.6% and R = 86.8% exactly:
    // P = 876/1000, R = 868/1000 -> TP = 190092, FP = 26908, FN = 28908
    // scaled down by gcd 4 -> TP 47523, FP 6727, FN 7227.
    std::vector<ScreenshotTypes> shots;
    auto add = [&](bool in_pred, bool in_truth, long count) {
        for (long i = 0; i < count; ++i) {
            ScreenshotTypes s;
            if (in_pred) s.predicted.insert(CoarseType::WidgetOcclusion);
            if (in_truth) s.truth.insert(CoarseType::WidgetOcclusion);
            shots.push_back(s);
        }
    };
    add(true, true, 47523);
    add(true, false, 6727);
    add(false, true, 7227);
    auto rows = type_prf(shots);
    const TypePRFRow* occ = nullptr;
    for (const auto& r : rows)
        if (r.type == CoarseType::WidgetOcclusion) occ = &r;
    REQUIRE(occ != nullptr);
    CHECK(occ->precision * 100 == doctest::Approx(87.6).epsilon(0.0005));
    CHECK(occ->recall * 100 == doctest::Approx(86.8).epsilon(0.0005));
    CHECK(occ->f1 * 100 == doctest::Approx(87.2).epsilon(0.0006));
    // F1 is the harmonic mean of the two.
    CHECK(occ->f1 == doctest::Approx(2 * occ->precision * occ->recall /
                                     (occ->precision + occ->recall)));
}

TEST_CASE("empty truth and reports give all-zero rows") {
    std::vector<ScreenshotTypes> shots(5);
    auto rows = type_prf(shots);
    CHECK(rows.size() == 8);
    for (const auto& r : rows) {
        CHECK(r.tp == 0);
        CHECK(r.fp == 0);
        CHECK(r.fn == 0);
        CHECK(r.f1 == 0.0);
    }
}

TEST_CASE("a matching type in report and truth is one true positive") {
    ScreenshotTypes s;
    s.predicted = {CoarseType::TextOverlap};
    s.truth = {CoarseType::TextOverlap};
    auto rows = type_prf({s});
    for (const auto& r : rows)
        if (r.type == CoarseType::TextOverlap) {
            CHECK(r.tp == 1);
            CHECK(r.fp == 0);
            CHECK(r.fn == 0);
            CHECK(r.f1 == doctest::Approx(1.0));
        }
}

TEST_CASE("F1 is harmonic for every row on random screenshot sets") {
    std::mt19937_64 rng(77);
    std::vector<ScreenshotTypes> shots;
    const CoarseType kinds[] = {CoarseType::TextOverlap, CoarseType::TextTruncation,
                                CoarseType::WidgetOcclusion, CoarseType::MissingImage};
    for (int i = 0; i < 300; ++i) {
        ScreenshotTypes s;
        for (auto k : kinds) {
            if (rng() % 3 == 0) s.predicted.insert(k);
            if (rng() % 3 == 0) s.truth.insert(k);
        }
        shots.push_back(s);
    }
    for (const auto& r : type_prf(shots)) {
        if (r.precision + r.recall == 0) {
            CHECK(r.f1 == 0.0);
        } else {
            CHECK(r.f1 == doctest::Approx(2 * r.precision * r.recall /
                                          (r.precision + r.recall)));
        }
    }
}

TEST_CASE("scenario shares reproduce published split/fold fractions") {
    std::vector<std::pair<bool, std::vector<CoarseType>>> shots;
    // 765 of 1063 occlusion instances under split/fold.
    for (int i = 0; i < 765; ++i) shots.push_back({true, {CoarseType::WidgetOcclusion}});
    for (int i = 0; i < 298; ++i) shots.push_back({false, {CoarseType::WidgetOcclusion}});
    // 1803 of 2540 truncation instances under split/fold.
    for (int i = 0; i < 1803; ++i) shots.push_back({true, {CoarseType::TextTruncation}});
    for (int i = 0; i < 737; ++i) shots.push_back({false, {CoarseType::TextTruncation}});

    auto rows = scenario_counts(shots);
    for (const auto& r : rows) {
        if (r.type == CoarseType::WidgetOcclusion) {
            CHECK(r.total == 1063);
            CHECK(r.split_fold == 765);
            CHECK(format_pct(r.split_share) == "71.97");
        }
        if (r.type == CoarseType::TextTruncation) {
            CHECK(r.total == 2540);
            CHECK(r.split_fold == 1803);
            CHECK(format_pct(r.split_share) == "70.98");
        }
        if (r.type == CoarseType::TextOverlap) {
            CHECK(r.total == 0);
            CHECK(r.split_share == 0.0);
        }
    }
}

TEST_CASE("all-conventional instances have zero split share") {
    std::vector<std::pair<bool, std::vector<CoarseType>>> shots = {
        {false, {CoarseType::MissingImage}},
        {false, {CoarseType::MissingImage, CoarseType::TextOverlap}},
    };
    for (const auto& r : scenario_counts(shots)) {
        CHECK(r.split_fold == 0);
        CHECK(r.split_share == 0.0);
    }
}
