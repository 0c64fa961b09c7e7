#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "dcg/bath.hpp"
#include "dcg/linalg.hpp"

using namespace dcg;
using namespace dcg::bath;
using C = cplx;

namespace {

CorrelationIndex ix(int op, bool bar = false) { return {op, bar}; }

// Brute-force two-spin oracle: numerically exponentiated interaction-picture
// operators traced against the bath state.
C two_spin_oracle(const TwoSpinBath& b, const std::vector<CorrelationIndex>& idx,
                  const std::vector<double>& times) {
    ComplexMatrix hb = ops::sigma_z();
    hb *= C{b.Omega, 0.0};
    std::vector<ComplexMatrix> bops;
    if (b.coupling == TwoSpinBath::Coupling::Heisenberg)
        bops = {ops::sigma_x(), ops::sigma_y(), ops::sigma_z()};
    else
        bops = {ops::sigma_z()};
    ComplexMatrix rho(2, 2);
    rho(0, 0) = b.rho_b00;
    rho(1, 1) = 1.0 - b.rho_b00;

    ComplexMatrix prod = ComplexMatrix::identity(2);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto u = matrix_exponential(C{0.0, times[k]} * hb);
        const auto udag = matrix_exponential(C{0.0, -times[k]} * hb);
        ComplexMatrix bt = u * bops[idx[k].op] * udag;
        if (idx[k].conjugated) bt = bt.dagger();
        prod = prod * bt;
    }
    return (prod * rho).trace();
}

std::vector<int> ranks_of(const std::vector<double>& times) {
    std::vector<int> order(times.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return times[a] > times[b]; });
    std::vector<int> rank(times.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = int(r);
    return rank;
}

C eval_expsum(const CorrExpSum& terms, const std::vector<double>& times) {
    C total{0.0, 0.0};
    for (const auto& t : terms) {
        C phase{0.0, 0.0};
        for (std::size_t k = 0; k < times.size(); ++k) phase += t.freq[k] * times[k];
        total += t.coef * std::exp(phase);
    }
    return total;
}

} // namespace

TEST_CASE("first-order correlators") {
    BathModel two_spin = TwoSpinBath{2.0, 0.3, TwoSpinBath::Coupling::Heisenberg};
    for (double t : {0.0, 0.7, 5.0}) {
        CHECK(std::abs(corr1(two_spin, ix(2), t) - C{2.0 * 0.3 - 1.0, 0.0}) < 1e-14);
        CHECK(std::abs(corr1(two_spin, ix(0), t)) < 1e-14);
        CHECK(std::abs(corr1(two_spin, ix(1), t)) < 1e-14);
    }
    BathModel bosonic = BosonicBath{};
    CHECK(std::abs(corr1(bosonic, ix(0), 1.3)) == 0.0);
    BathModel leads = FermionLeads{};
    CHECK(std::abs(corr1(leads, ix(0), 0.2)) == 0.0);
    CHECK(std::abs(corr1(leads, ix(1, true), 0.2)) == 0.0);
}

TEST_CASE("two-spin second order closed forms from the worked example") {
    const double Om = 2.0, r00 = 0.3;
    BathModel m = TwoSpinBath{Om, r00, TwoSpinBath::Coupling::Heisenberg};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int trial = 0; trial < 8; ++trial) {
        const double t1 = u(rng), t2 = u(rng), d = t1 - t2;
        const double cos2 = std::cos(2.0 * d * Om), sin2 = std::sin(2.0 * d * Om);
        const double pol = 1.0 - 2.0 * r00;
        const C c11{cos2, -pol * sin2};
        const C c12{-sin2, -pol * cos2};
        const C c21{sin2, pol * cos2};
        const C c33{1.0, 0.0};
        CHECK(std::abs(corr2(m, ix(0), ix(0), t1, t2) - c11) < 1e-13);
        CHECK(std::abs(corr2(m, ix(0), ix(1), t1, t2) - c12) < 1e-13);
        CHECK(std::abs(corr2(m, ix(1), ix(0), t1, t2) - c21) < 1e-13);
        CHECK(std::abs(corr2(m, ix(1), ix(1), t1, t2) - c11) < 1e-13);
        CHECK(std::abs(corr2(m, ix(2), ix(2), t1, t2) - c33) < 1e-13);
        // cross terms with sigma_z vanish
        CHECK(std::abs(corr2(m, ix(0), ix(2), t1, t2)) < 1e-14);
        CHECK(std::abs(corr2(m, ix(2), ix(1), t1, t2)) < 1e-14);
    }
}

TEST_CASE("two-spin correlations match the brute-force oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_int_distribution<int> opd(0, 2);
    std::bernoulli_distribution coin;
    BathModel m = TwoSpinBath{1.7, 0.62, TwoSpinBath::Coupling::Heisenberg};
    const auto& ts = std::get<TwoSpinBath>(m);
    for (std::size_t n : {1u, 2u, 3u, 4u}) {
        for (int trial = 0; trial < 6; ++trial) {
            std::vector<CorrelationIndex> idx;
            std::vector<double> times;
            for (std::size_t k = 0; k < n; ++k) {
                idx.push_back(ix(opd(rng), coin(rng)));
                times.push_back(u(rng));
            }
            const C fast = corr_n(m, idx, times);
            const C slow = two_spin_oracle(ts, idx, times);
            CHECK(std::abs(fast - slow) < 1e-12);
        }
    }
}

TEST_CASE("bosonic pair correlator matches the frequency-integral oracle") {
    BosonicBath b{1.0, 1.0, 1.0, 1.0};
    BathModel m = b;
    for (double dt : {0.0, 0.5, 2.0}) {
        // adaptive quadrature of Ecfunc2sp cut off at max(40/beta, 20 wc)
        const double w_max = std::max(40.0 / b.beta, 20.0 * b.omega_c);
        auto res = adaptive_integrate(
            [&](double w) -> C {
                const double gw = spectral_density(b, w);
                const double n = bose_occupation(b.beta, w);
                return gw / (2.0 * M_PI) *
                       (n * std::exp(C{0.0, w * dt}) + (1.0 + n) * std::exp(C{0.0, -w * dt}));
            },
            1e-12, w_max, {1e-12, 1e-11, 300000});
        REQUIRE(res.converged);
        CHECK(std::abs(corr2(m, ix(0), ix(0), dt, 0.0) - res.value) < 1e-8);
    }
}

TEST_CASE("fermionic pair correlators") {
    FermionLeads f{1.0, 1.0, 2.0, 1.0, 0.0, 0.0};
    BathModel m = f;
    // C_L(0) = Gamma_L0 * delta_L / 2 = 1.0
    CHECK(std::abs(corr2(m, ix(0), ix(1), 0.4, 0.4) - C{1.0, 0.0}) < 1e-14);
    // unbalanced pairs vanish
    CHECK(std::abs(corr2(m, ix(0), ix(0), 0.3, 0.1)) == 0.0);
    CHECK(std::abs(corr2(m, ix(1), ix(1), 0.3, 0.1)) == 0.0);
    // conjugation flips the operator index
    CHECK(std::abs(corr2(m, ix(1, true), ix(1), 0.9, 0.2) -
                   corr2(m, ix(0), ix(1), 0.9, 0.2)) == 0.0);
}

TEST_CASE("third order") {
    CHECK(std::abs(corr3(BathModel{BosonicBath{}}, ix(0), ix(0), ix(0), 0.1, 0.5, 0.9)) == 0.0);
    CHECK(std::abs(corr3(BathModel{FermionLeads{}}, ix(0), ix(1), ix(0), 0.1, 0.5, 0.9)) == 0.0);
    BathModel sz = TwoSpinBath{1.0, 1.0, TwoSpinBath::Coupling::SingleSigmaZ};
    CHECK(std::abs(corr3(sz, ix(0), ix(0), ix(0), 0.3, 1.1, 2.2) - C{1.0, 0.0}) < 1e-14);
}

TEST_CASE("fourth order") {
    SUBCASE("bosonic Wick sum degenerates at equal times") {
        BathModel m = BosonicBath{1.0, 1.0, 1.0, 1.0};
        const C c0 = corr2(m, ix(0), ix(0), 0.7, 0.7);
        const C c4 = corr4(m, ix(0), ix(0), ix(0), ix(0), 0.7, 0.7, 0.7, 0.7);
        CHECK(std::abs(c4 - 3.0 * c0 * c0) < 1e-12 * std::abs(c4));
    }
    SUBCASE("fermionic pairing formula C_1212") {
        FermionLeads f{0.8, 1.3, 2.0, 0.7, 0.4, -0.3};
        BathModel m = f;
        const double t1 = 0.9, t2 = 0.1, t3 = 1.7, t4 = 0.4;
        const C expect = fermion_lead_corr(f, Lead::Left, t1 - t2) *
                             fermion_lead_corr(f, Lead::Left, t3 - t4) +
                         fermion_lead_corr(f, Lead::Left, t1 - t4) *
                             fermion_lead_corr(f, Lead::Right, t3 - t2);
        CHECK(std::abs(corr4(m, ix(0), ix(1), ix(0), ix(1), t1, t2, t3, t4) - expect) < 1e-13);
        // barred version equals the unbarred partner: C_{1bar 2bar 1bar 2bar} = C_2121
        CHECK(std::abs(corr4(m, ix(0, true), ix(1, true), ix(0, true), ix(1, true), t1, t2, t3, t4) -
                       corr4(m, ix(1), ix(0), ix(1), ix(0), t1, t2, t3, t4)) == 0.0);
        // unbalanced patterns vanish
        CHECK(std::abs(corr4(m, ix(0), ix(0), ix(0), ix(1), t1, t2, t3, t4)) == 0.0);
    }
    SUBCASE("two-spin single-sigma-z fourth order equals pair-product pattern") {
        BathModel m = TwoSpinBath{3.0, 0.4, TwoSpinBath::Coupling::SingleSigmaZ};
        // sigma_z is time independent: <z z z z> = 1 for any polarization
        CHECK(std::abs(corr4(m, ix(0), ix(0), ix(0), ix(0), 0.1, 2.0, 0.7, 1.1) - C{1.0, 0.0}) <
              1e-14);
    }
}

TEST_CASE("correlation function invariants") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-3.0, 3.0);

    std::vector<BathModel> models{TwoSpinBath{1.3, 0.25, TwoSpinBath::Coupling::Heisenberg},
                                  BosonicBath{0.7, 1.0, 2.0, 0.5},
                                  FermionLeads{1.0, 0.5, 1.5, 0.8, 0.2, -0.4}};

    SUBCASE("hermiticity C_ji*(t2,t1) = C_ij(t1,t2)") {
        for (const auto& m : models) {
            const int n_ops = operator_count(m);
            for (int trial = 0; trial < 10; ++trial) {
                const int i = trial % n_ops, j = (trial / 2) % n_ops;
                const double t1 = u(rng), t2 = u(rng);
                // overbar of the reversed pair: conjugate transposes each operator
                const C lhs = std::conj(corr2(m, ix(j, true), ix(i, true), t2, t1));
                const C rhs = corr2(m, ix(i), ix(j), t1, t2);
                CHECK(std::abs(lhs - rhs) < 1e-12);
            }
        }
    }

    SUBCASE("fourth order conjugation C(t1..t4) = C*(t4..t1)") {
        for (const auto& m : {models[1], models[2]}) {
            for (int trial = 0; trial < 6; ++trial) {
                const double t1 = u(rng), t2 = u(rng), t3 = u(rng), t4 = u(rng);
                std::vector<CorrelationIndex> idx{ix(0), ix(1 % operator_count(m)), ix(0),
                                                  ix(1 % operator_count(m))};
                std::vector<CorrelationIndex> rev_bar{idx[3], idx[2], idx[1], idx[0]};
                for (auto& q : rev_bar) q.conjugated = !q.conjugated;
                const C lhs = corr_n(m, idx, {t1, t2, t3, t4});
                const C rhs = std::conj(corr_n(m, rev_bar, {t4, t3, t2, t1}));
                CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
            }
        }
    }

    SUBCASE("stationarity of corr2 under time shifts") {
        for (const auto& m : {models[1], models[2]}) {
            for (int trial = 0; trial < 5; ++trial) {
                const double t1 = u(rng), t2 = u(rng), shift = u(rng);
                const int j = operator_count(m) > 1 ? 1 : 0;
                const C a = corr2(m, ix(0), ix(j), t1, t2);
                const C b = corr2(m, ix(0), ix(j), t1 + shift, t2 + shift);
                CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(a)));
            }
        }
    }
}

TEST_CASE("exponential correlator structure matches numeric values") {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> u(0.0, 4.0);

    SUBCASE("two-spin") {
        BathModel m = TwoSpinBath{2.0, 0.8, TwoSpinBath::Coupling::Heisenberg};
        for (int trial = 0; trial < 6; ++trial) {
            std::vector<CorrelationIndex> idx{ix(trial % 3), ix((trial + 1) % 3)};
            std::vector<double> times{u(rng), u(rng)};
            const auto sum = corr_expsum(m, idx, ranks_of(times));
            CHECK(std::abs(eval_expsum(sum, times) - corr_n(m, idx, times)) < 1e-13);
        }
    }
    SUBCASE("fermionic at fixed ordering") {
        BathModel m = FermionLeads{1.1, 0.6, 0.9, 1.4, 0.3, -0.2};
        for (int trial = 0; trial < 8; ++trial) {
            std::vector<CorrelationIndex> idx{ix(0), ix(1), ix(trial % 2), ix(1 - trial % 2)};
            std::vector<double> times{u(rng), u(rng), u(rng), u(rng)};
            const auto sum = corr_expsum(m, idx, ranks_of(times));
            CHECK(std::abs(eval_expsum(sum, times) - corr_n(m, idx, times)) < 1e-12);
        }
    }
}

TEST_CASE("spectral density and tunneling rates") {
    BosonicBath b{1.0, 1.0, 1.0, 1.0};
    CHECK(spectral_density(b, b.omega_c) == doctest::Approx(std::exp(-1.0)));
    CHECK_THROWS_AS(spectral_density(b, -0.5), domain_error);

    FermionLeads f{2.0, 3.0, 0.5, 0.8, 1.0, -1.0};
    CHECK(tunneling_rate(f, Lead::Right, f.eps_r) == doctest::Approx(f.gamma_r0));
    CHECK(tunneling_rate(f, Lead::Left, f.eps_l + f.delta_l) == doctest::Approx(f.gamma_l0 / 2.0));
}

TEST_CASE("half Fourier transforms") {
    SUBCASE("fermionic closed form vs direct quadrature") {
        FermionLeads f{1.0, 0.7, 0.8, 1.2, 0.5, -0.3};
        BathModel m = f;
        for (double nu : {-1.3, 0.0, 0.9}) {
            for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 0}}) {
                auto res = adaptive_integrate(
                    [&](double dt) {
                        return corr2(m, ix(i), ix(j), dt, 0.0) * std::exp(C{0.0, nu * dt});
                    },
                    0.0, 80.0, {1e-12, 1e-11, 200000});
                CHECK(std::abs(half_fourier(m, ix(i), ix(j), nu) - res.value) < 1e-9);
            }
        }
    }
    SUBCASE("bosonic principal-value route vs direct time integral") {
        BosonicBath b{1.0, 1.0, 1.0, 1.0};
        BathModel m = b;
        for (double nu : {-1.0, 0.7}) {
            auto res = adaptive_integrate(
                [&](double dt) {
                    return bosonic_pair_corr(b, dt) * std::exp(C{0.0, nu * dt});
                },
                0.0, 4000.0, {1e-10, 1e-9, 400000}, {1.0, 10.0, 100.0});
            REQUIRE(res.converged);
            CHECK(std::abs(half_fourier(m, ix(0), ix(0), nu) - res.value) < 2e-5);
        }
    }
    SUBCASE("full Fourier transform of the bosonic bath is the band weight") {
        BosonicBath b{0.8, 1.0, 1.5, 2.0};
        BathModel m = b;
        for (double nu : {-2.0, -0.4, 1.1}) {
            CHECK(std::abs(full_fourier(m, ix(0), ix(0), nu) -
                           C{bosonic_band_weight(b, nu), 0.0}) < 1e-10);
        }
    }
}
