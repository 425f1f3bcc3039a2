#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstring>
#include <vector>

#include "ffsim/influence.hpp"
#include "ffsim/kernels.hpp"
#include "ffsim/model.hpp"
#include "ffsim/rng.hpp"

using namespace ffsim;

namespace {

struct Batch {
    std::size_t n;
    std::vector<double> sex, age, env, exp, wca, know, trust, access, freq;

    explicit Batch(std::size_t n_, Rng& r) : n(n_) {
        for (auto* v : {&sex, &age, &env, &exp, &wca, &know, &trust, &access, &freq}) {
            v->resize(n);
            for (auto& x : *v) x = r.next_double();
        }
    }

    PredictorArrays view() const {
        return {sex.data(), age.data(), env.data(),   exp.data(),  wca.data(),
                know.data(), trust.data(), access.data(), freq.data()};
    }
};

} // namespace

TEST_CASE("scalar batch reproduces the per-agent functions bitwise") {
    Rng r(9001);
    const auto& k = scalar_batch();
    // Odd length exercises any tail handling.
    Batch b(257, r);
    std::vector<double> out(b.n);
    k.purchase_prob(b.view(), out.data(), b.n);
    for (std::size_t i = 0; i < b.n; ++i) {
        AgentState a;
        a.sex = b.sex[i];
        a.age = b.age[i];
        a.env = b.env[i];
        a.exp = b.exp[i];
        a.wca = b.wca[i];
        a.know = b.know[i];
        a.trust = b.trust[i];
        a.access = b.access[i];
        a.freq = b.freq[i];
        REQUIRE(out[i] == purchase_probability(a));
    }

    std::vector<double> x(b.n), s(b.n), fed(b.n);
    for (std::size_t i = 0; i < b.n; ++i) {
        x[i] = r.next_double();
        s[i] = r.next_double();
    }
    k.sm_feedback(x.data(), s.data(), 0.17, fed.data(), b.n);
    for (std::size_t i = 0; i < b.n; ++i)
        REQUIRE(fed[i] == sm_feedback(x[i], s[i], 0.17));

    std::vector<double> prior(b.n), promoted(b.n), blended(b.n);
    for (std::size_t i = 0; i < b.n; ++i) {
        prior[i] = r.next_double();
        promoted[i] = r.next_double();
    }
    k.blend(prior.data(), promoted.data(), s.data(), 2.0, blended.data(), b.n);
    for (std::size_t i = 0; i < b.n; ++i)
        REQUIRE(blended[i] == blend(prior[i], promoted[i], s[i], 2.0));

    std::vector<double> scaled = s;
    k.scale(scaled.data(), 0.998751, b.n);
    for (std::size_t i = 0; i < b.n; ++i)
        REQUIRE(scaled[i] == s[i] * 0.998751);
}

TEST_CASE("avx2 backend is bit-identical to scalar") {
    const BatchKernels* v = avx2_batch();
    if (!v) {
        MESSAGE("avx2 unavailable on this machine, skipping");
        return;
    }
    const auto& ref = scalar_batch();
    Rng r(9002);
    // Lengths straddling the vector width, including empty and tails.
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3},
                          std::size_t{4}, std::size_t{5}, std::size_t{64},
                          std::size_t{1050}, std::size_t{1031}}) {
        Batch b(n, r);
        std::vector<double> a(n), c(n);
        ref.purchase_prob(b.view(), a.data(), n);
        v->purchase_prob(b.view(), c.data(), n);
        REQUIRE(std::memcmp(a.data(), c.data(), n * sizeof(double)) == 0);

        std::vector<double> x(n), s(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = r.next_double();
            s[i] = r.next_double();
        }
        ref.sm_feedback(x.data(), s.data(), -0.21, a.data(), n);
        v->sm_feedback(x.data(), s.data(), -0.21, c.data(), n);
        REQUIRE(std::memcmp(a.data(), c.data(), n * sizeof(double)) == 0);

        std::vector<double> q(n);
        for (std::size_t i = 0; i < n; ++i) q[i] = r.next_double();
        ref.blend(x.data(), q.data(), s.data(), 2.0, a.data(), n);
        v->blend(x.data(), q.data(), s.data(), 2.0, c.data(), n);
        REQUIRE(std::memcmp(a.data(), c.data(), n * sizeof(double)) == 0);

        std::vector<double> y1 = x, y2 = x;
        ref.scale(y1.data(), 0.97, n);
        v->scale(y2.data(), 0.97, n);
        REQUIRE(std::memcmp(y1.data(), y2.data(), n * sizeof(double)) == 0);
    }
}

TEST_CASE("blend kernels accept in-place output") {
    Rng r(9003);
    std::size_t n = 37;
    std::vector<double> prior(n), promoted(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        prior[i] = r.next_double();
        promoted[i] = r.next_double();
        s[i] = r.next_double();
    }
    std::vector<double> expect(n);
    scalar_batch().blend(prior.data(), promoted.data(), s.data(), 2.0,
                         expect.data(), n);

    std::vector<double> inplace = prior;
    scalar_batch().blend(inplace.data(), promoted.data(), s.data(), 2.0,
                         inplace.data(), n);
    CHECK(inplace == expect);

    if (const BatchKernels* v = avx2_batch()) {
        std::vector<double> vin = prior;
        v->blend(vin.data(), promoted.data(), s.data(), 2.0, vin.data(), n);
        CHECK(vin == expect);
    }
}

TEST_CASE("backend selection") {
    const BatchKernels* s = select_batch("scalar");
    REQUIRE(s != nullptr);
    CHECK(std::string(s->name) == "scalar");

    const BatchKernels* a = select_batch("auto");
    REQUIRE(a != nullptr);

    CHECK(select_batch("neon") == nullptr);
    CHECK(select_batch("") == nullptr);

    auto names = available_backends();
    CHECK(std::find(names.begin(), names.end(), "scalar") != names.end());
    if (avx2_batch()) {
        CHECK(std::find(names.begin(), names.end(), "avx2") != names.end());
        CHECK(std::string(a->name) == "avx2");
        CHECK(select_batch("avx2") == avx2_batch());
    } else {
        CHECK(select_batch("avx2") == nullptr);
        CHECK(std::string(a->name) == "scalar");
    }
}
