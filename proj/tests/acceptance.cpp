// acceptance.cpp — end-to-end acceptance criteria, one PASS/FAIL line each
//
// Exit status is the number of failed criteria (0 when everything passes).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "sbparity/cli/commands.hpp"
#include "sbparity/sbparity.hpp"
#include "support/oracles.hpp"

using namespace sbparity;

namespace {

struct Outcome {
    bool pass{true};
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

std::string fmt(double x) { return cli::format_real(x); }

// Grid shared by criteria 2-4.
struct GridPoint {
    double delta, s, alpha;
    std::size_t modes;
};

std::vector<GridPoint> theorem_grid() {
    std::vector<GridPoint> grid;
    for (std::size_t modes : {1u, 3u})
        for (double delta : {0.05, 0.1, 0.5})
            for (double s : {0.3, 0.5, 0.7, 1.0})
                for (double alpha : {0.01, 0.1, 0.5, 1.0}) grid.push_back({delta, s, alpha, modes});
    return grid;
}

ModelParams grid_params(const GridPoint& g) {
    auto bath = discretize_bath(SpectralLaw{g.alpha, g.s, 1.0}, g.modes, 2.0);
    auto policy = g.modes == 1 ? TruncationPolicy::per_mode(40) : TruncationPolicy::total_quanta(10);
    return ModelParams(g.delta, std::move(bath), enumerate_basis(g.modes, policy));
}

const std::vector<std::pair<GridPoint, TheoremReport>>& grid_reports() {
    static const auto reports = [] {
        std::vector<std::pair<GridPoint, TheoremReport>> out;
        for (const auto& g : theorem_grid()) out.emplace_back(g, theorem_report(grid_params(g)));
        return out;
    }();
    return reports;
}

Outcome degeneracy_at_delta_zero() {
    Outcome o;
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> mode_count(1, 3), cap(1, 6);
    std::uniform_real_distribution<double> omega(0.05, 1.0), lambda(0.0, 2.0);
    for (int draw = 0; draw < 20; ++draw) {
        const auto m = static_cast<std::size_t>(mode_count(rng));
        std::vector<std::pair<double, double>> modes;
        for (std::size_t k = 0; k < m; ++k) modes.emplace_back(omega(rng), lambda(rng));
        auto bath = bath_from_modes(SpectralLaw{0.1, 1.0, 1.0}, modes);
        const ModelParams p(0.0, std::move(bath), enumerate_basis(m, TruncationPolicy::default_for(m, cap(rng))));
        const auto plus = assemble_branch(p, BranchSign::Even);
        const auto minus = assemble_branch(p, BranchSign::Odd);
        if (!plus.is_diagonal() || !minus.is_diagonal()) o.fail("branch not diagonal at draw " + std::to_string(draw));
        const auto ladder = degenerate_energy_set(p.basis, p.bath);
        const auto ep = eigen_lowest(plus, plus.dim()).values;
        const auto em = eigen_lowest(minus, minus.dim()).values;
        for (std::size_t i = 0; i < ladder.size(); ++i)
            if (std::abs(ep[i] - ladder[i]) > 1e-12 || std::abs(em[i] - ladder[i]) > 1e-12)
                o.fail("spectrum off ladder at draw " + std::to_string(draw));
    }
    if (o.pass) o.detail = "20 baths, spectra equal the H0 ladder";
    return o;
}

Outcome strict_nondegeneracy() {
    Outcome o;
    const double eps = std::numeric_limits<double>::epsilon();
    int resolvable = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& [g, r] : grid_reports()) {
        min_margin = std::min(min_margin, r.margin);
        if (r.margin < -10.0 * r.tol) o.fail("margin " + fmt(r.margin) + " below -10 tol");
        if (r.predicted_gap > 1e3 * eps * r.scale) {
            ++resolvable;
            if (!(r.margin > 0.0))
                o.fail("margin " + fmt(r.margin) + " <= 0 at delta=" + fmt(g.delta) + " s=" + fmt(g.s) +
                       " alpha=" + fmt(g.alpha) + " M=" + std::to_string(g.modes));
        }
    }
    if (o.pass)
        o.detail = std::to_string(grid_reports().size()) + " configs, " + std::to_string(resolvable) +
                   " resolvable, min margin " + fmt(min_margin);
    return o;
}

Outcome rayleigh_inequality() {
    Outcome o;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& [g, r] : grid_reports()) {
        const double excess = r.e_plus_min + r.e_minus_min - 2.0 * r.e_min_eo;
        worst = std::max(worst, excess);
        if (excess > 10.0 * r.tol * r.scale)
            o.fail("E+ + E- - 2 E_eo = " + fmt(excess) + " at s=" + fmt(g.s) + " alpha=" + fmt(g.alpha));
    }
    if (o.pass) o.detail = "max E+ + E- - 2 E_eo = " + fmt(worst);
    return o;
}

Outcome gap_identity() {
    Outcome o;
    int checked = 0;
    double worst = 0.0;
    for (const auto& [g, r] : grid_reports()) {
        if (g.modes != 1 || std::abs(r.overlap) <= 1e-6) continue;
        ++checked;
        const double err = std::abs(r.measured_gap - r.predicted_gap);
        worst = std::max(worst, err);
        if (err > 1e-8 * std::max(1.0, std::abs(r.measured_gap)))
            o.fail("identity error " + fmt(err) + " at s=" + fmt(g.s) + " alpha=" + fmt(g.alpha));
    }
    if (checked == 0) o.fail("no configuration passed the overlap filter");
    if (o.pass) o.detail = std::to_string(checked) + " ground pairs, max error " + fmt(worst);
    return o;
}

Outcome single_mode_oracle() {
    Outcome o;
    double worst = 0.0;
    int points = 0;
    for (double lambda : {0.5, 1.0, 1.5, 2.0})
        for (double delta : {0.1, 0.5, 1.0}) {
            ++points;
            auto bath = bath_from_modes(SpectralLaw{0.1, 1.0, 1.0}, {{1.0, lambda}});
            const ModelParams p(delta, std::move(bath), enumerate_basis(1, TruncationPolicy::per_mode(40)));
            const auto r = theorem_report(p);
            const double ref = oracle::bare_fock_ground_energy(1.0, lambda, delta, 200);
            const double err = std::abs(r.e_gs - ref);
            worst = std::max(worst, err);
            if (err > 1e-8) o.fail("lambda=" + fmt(lambda) + " delta=" + fmt(delta) + " error " + fmt(err));
        }
    if (o.pass) o.detail = std::to_string(points) + " points, max |dE| " + fmt(worst);
    return o;
}

Outcome matrix_element_oracle() {
    Outcome o;
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> mode_count(1, 3);
    std::uniform_real_distribution<double> qdist(0.0, 1.2);
    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const auto m_count = static_cast<std::size_t>(mode_count(rng));
        std::vector<std::pair<double, double>> modes;
        for (std::size_t k = 0; k < m_count; ++k) modes.emplace_back(1.0 / static_cast<double>(k + 1), 0.0);
        for (auto& [omega, lambda] : modes) lambda = 2.0 * omega * qdist(rng);
        const auto bath = bath_from_modes(SpectralLaw{0.1, 1.0, 1.0}, modes);

        // occupation vectors with total <= 8 each
        auto draw_occupation = [&] {
            OccupationVector v(m_count, 0);
            std::uniform_int_distribution<int> total_dist(0, 8);
            const int total = total_dist(rng);
            std::uniform_int_distribution<std::size_t> slot(0, m_count - 1);
            for (int t = 0; t < total; ++t) ++v[slot(rng)];
            return v;
        };
        const auto m = draw_occupation();
        const auto n = draw_occupation();
        const double err = std::abs(d_element(m, n, bath) - overlap_oracle(m, n, bath, 160));
        worst = std::max(worst, err);
        if (err > 1e-8) o.fail("draw " + std::to_string(draw) + " error " + fmt(err));
        if (l_element(m, n, bath) != l_element(n, m, bath)) o.fail("L not symmetric at draw " + std::to_string(draw));
    }
    const auto zero = bath_from_modes(SpectralLaw{0.0, 1.0, 1.0}, {{1.0, 0.0}, {0.5, 0.0}, {0.2, 0.0}});
    const auto basis = enumerate_basis(3, TruncationPolicy::total_quanta(5));
    const auto table = d_matrix(basis, zero);
    for (std::size_t i = 0; i < basis.dim(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            int total = 0;
            for (int v : basis.state(i)) total += v;
            const double expected = i == j ? (total % 2 == 0 ? 1.0 : -1.0) : 0.0;
            if (table.D(i, j) != expected) o.fail("q=0 D is not diag((-1)^N)");
        }
    if (o.pass) o.detail = "100 draws, max |D - oracle| " + fmt(worst);
    return o;
}

Outcome parity_closed_forms() {
    Outcome o;
    double worst = 0.0;
    for (double q = 0.0; q <= 1.0 + 1e-12; q += 0.125) {
        const auto bath = bath_from_modes(SpectralLaw{0.1, 1.0, 1.0}, {{1.0, 2.0 * q}});
        const double scale = std::exp(-4.0 * q * q);
        double previous = 0.0;
        for (int n_tr = 0; n_tr <= 50; ++n_tr) {
            const double o_value = o_diagonal({0}, bath, n_tr);
            const double expected = oracle::poisson_partial_sum(4.0 * q * q, n_tr);
            const double err = std::abs(o_value - expected);
            worst = std::max(worst, err);
            if (err > 1e-12) o.fail("O mismatch " + fmt(err) + " at q=" + fmt(q) + " N=" + std::to_string(n_tr));
            const double scaled = scale * o_value;
            if (scaled < previous || scaled > 1.0 + 1e-15) o.fail("scale*O not monotone from below at q=" + fmt(q));
            previous = scaled;
        }
    }
    const auto unit = bath_from_modes(SpectralLaw{0.5, 1.0, 1.0}, {{1.0, 1.0}}); // 4 q^2 = 1
    const double deficiency = parity_deficiency(unit, 1, {0});
    const double expected = 1.0 - 2.0 * std::exp(-1.0);
    if (std::abs(deficiency - expected) > 1e-12) o.fail("deficiency " + fmt(deficiency) + " != 1 - 2/e");
    if (o.pass) o.detail = "max |O - partial sum| " + fmt(worst) + ", deficiency(1,1) " + fmt(deficiency);
    return o;
}

Outcome critical_alpha_behavior() {
    Outcome o;
    const Discretization disc{30, 2.0, 1.0};
    double previous = 0.0;
    std::string values;
    for (int n_tr : {5, 10, 20, 40}) {
        const double a = critical_alpha(0.5, n_tr, disc, 0.01).alpha_c;
        values += (values.empty() ? "" : " ") + fmt(a);
        if (a < previous) o.fail("alpha_c decreased at N_tr=" + std::to_string(n_tr));
        previous = a;
    }
    // scalar root of 1 - e^{-x}(1 + x) = 0.01, alpha = x / 2
    const auto bracket = boost::math::tools::bisect(
        [](double x) { return 1.0 - std::exp(-x) * (1.0 + x) - 0.01; }, 1e-6, 2.0,
        boost::math::tools::eps_tolerance<double>(52));
    const double oracle_alpha = 0.25 * (bracket.first + bracket.second);
    const auto bath_at = [](double alpha) {
        return bath_from_modes(SpectralLaw{alpha, 1.0, 1.0}, {{1.0, std::sqrt(2.0 * alpha)}});
    };
    const auto cp = find_critical_alpha(bath_at, 1, 0.01, {0});
    if (std::abs(cp.beta - 1.0) > 1e-12) o.fail("single-mode beta " + fmt(cp.beta));
    if (std::abs(cp.alpha_c - oracle_alpha) > 1e-4 || std::abs(cp.alpha_c - 0.0743) > 1e-4)
        o.fail("single-mode alpha_c " + fmt(cp.alpha_c) + " vs " + fmt(oracle_alpha));
    if (o.pass) o.detail = "alpha_c(N_tr) = " + values + "; single mode " + fmt(cp.alpha_c);
    return o;
}

// Pinned after the first verified run of the default 16-point sweep.
constexpr double kPinnedAlphaC[16] = {
#include "support/phase_diagram_pin.inc"
};

int run_process(const std::string& cmd) {
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Outcome phase_diagram_reproducible() {
    Outcome o;
    const auto dir = std::filesystem::temp_directory_path() / ("sbparity_accept_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const auto a = dir / "a.csv";
    const auto b = dir / "b.csv";
    const std::string cli = SBPARITY_CLI_PATH;
    if (run_process(cli + " phase-diagram --out " + a.string()) != 0 ||
        run_process(cli + " phase-diagram --jobs 4 --out " + b.string()) != 0)
        o.fail("phase-diagram exited non-zero");
    const std::string first = slurp(a);
    const std::string second = slurp(b);
    std::filesystem::remove_all(dir);
    if (first != second) o.fail("outputs differ between runs");

    std::istringstream lines(first);
    std::string line;
    std::getline(lines, line);
    std::size_t row = 0;
    double worst = 0.0;
    while (std::getline(lines, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double s = std::stod(line.substr(0, c1));
        const double alpha = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        if (row >= 16) {
            o.fail("more than 16 rows");
            break;
        }
        const double expected_s = 0.25 + 0.05 * static_cast<double>(row);
        if (std::abs(s - expected_s) > 1e-12) o.fail("row " + std::to_string(row) + " has s=" + fmt(s));
        const double rel = std::abs(alpha / kPinnedAlphaC[row] - 1.0);
        worst = std::max(worst, rel);
        if (!(rel <= 1e-9)) o.fail("alpha_c(s=" + fmt(s) + ") = " + fmt(alpha) + " drifted from pin");
        ++row;
    }
    if (row != 16) o.fail("expected 16 rows, got " + std::to_string(row));
    if (o.pass) o.detail = "16 rows byte-identical across runs, max rel drift " + fmt(worst);
    return o;
}

Outcome kronecker_sum_spectrum() {
    Outcome o;
    auto bath = bath_from_modes(SpectralLaw{0.1, 1.0, 1.0}, {{1.0, 1.0}});
    const ModelParams p(0.2, std::move(bath), enumerate_basis(1, TruncationPolicy::per_mode(3)));
    const auto plus = assemble_branch(p, BranchSign::Even);
    const auto minus = assemble_branch(p, BranchSign::Odd);
    const auto ep = eigen_lowest(plus, plus.dim()).values;
    const auto em = eigen_lowest(minus, minus.dim()).values;
    std::vector<double> sums;
    for (double x : ep)
        for (double y : em) sums.push_back(x + y);
    std::sort(sums.begin(), sums.end());
    const auto k = kronecker_sum(plus, minus);
    const auto got = eigen_lowest(k, k.dim()).values;
    double worst = 0.0;
    for (std::size_t i = 0; i < sums.size(); ++i) worst = std::max(worst, std::abs(got[i] - sums[i]));
    if (worst > 1e-10) o.fail("max deviation " + fmt(worst));
    if (o.pass) o.detail = "16 eigenvalues, max deviation " + fmt(worst);
    return o;
}

Outcome closure_ratio() {
    Outcome o;
    struct Case {
        std::size_t m, n_tr, num, den;
    };
    for (const Case& c : {Case{1, 9, 1, 10}, Case{100, 9, 10, 1}, Case{10, 99, 1, 10}}) {
        const auto r = closure_report(c.m, c.n_tr);
        if (r.ratio_num != c.num || r.ratio_den != c.den)
            o.fail("R(" + std::to_string(c.m) + "," + std::to_string(c.n_tr) + ") = " + std::to_string(r.ratio_num) +
                   "/" + std::to_string(r.ratio_den));
    }
    if (o.pass) o.detail = "1/10, 10/1, 1/10";
    return o;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> check;
        double budget_s;
    };
    const std::vector<Criterion> criteria{
        {"delta-zero degeneracy", degeneracy_at_delta_zero, 1.0},
        {"strict non-degeneracy", strict_nondegeneracy, 120.0},
        {"Rayleigh inequality", rayleigh_inequality, 120.0},
        {"gap identity", gap_identity, 120.0},
        {"single-mode bare-Fock oracle", single_mode_oracle, 30.0},
        {"matrix-element oracle", matrix_element_oracle, 60.0},
        {"parity closed forms", parity_closed_forms, 60.0},
        {"critical alpha behaviour", critical_alpha_behavior, 10.0},
        {"phase-diagram reproducibility", phase_diagram_reproducible, 300.0},
        {"Kronecker-sum spectrum", kronecker_sum_spectrum, 10.0},
        {"closure ratio", closure_ratio, 1.0},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.check();
        } catch (const std::exception& e) {
            outcome.fail(std::string("exception: ") + e.what());
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (outcome.pass && elapsed > c.budget_s) outcome.fail("runtime " + fmt(elapsed) + " s over budget");
        if (!outcome.pass) ++failures;
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.2fs", elapsed);
        std::cout << (outcome.pass ? "PASS" : "FAIL") << "  [" << (i + 1) << "] " << c.name << " (" << timing
                  << "): " << outcome.detail << "\n";
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " criteria passed\n";
    return failures;
}
