// Acceptance suite: one PASS/FAIL line per criterion. With an argument (ac1..ac8) only
// that criterion runs and the exit status reflects it.

#include "support.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace extcoop;
using support::load;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

IntegratorSettings span(double t1, double dt) {
    IntegratorSettings s;
    s.t1 = t1;
    s.dt = dt;
    return s;
}

FlowProfile chemostat_flows(const ReactionNetwork& net) {
    return support::load_flows("example1_flows.json", net);
}

Outcome ac1() {
    const auto t0 = Clock::now();
    std::ostringstream why;
    bool ok = true;
    auto expect = [&](bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            why << what << "; ";
        }
    };
    auto batch = [](const ReactionNetwork& n) { return FlowProfile::batch(n.num_inlets()); };

    const auto par = load("parallel.json");
    expect(classify_system(par, batch(par)).system_verdict == SystemVerdict::Competitive, "parallel not competitive");

    const auto flip = load("flipped_parallel.json");
    expect(classify_system(flip, batch(flip)).system_verdict == SystemVerdict::Cooperative, "flipped not cooperative");

    const auto ser = load("series.json");
    const auto sr = classify_system(ser, batch(ser));
    expect(sr.system_verdict == SystemVerdict::Cooperative && basis_label(sr.pair(0, 1).basis) == "Corollary 1",
           "series not cooperative by the series rule");

    const auto cond = load("conditional.json");
    const auto cr = classify_system(cond, batch(cond));
    const auto& pc = cr.pair(0, 1);
    std::set<std::string> texts;
    for (const auto& c : pc.conditions) texts.insert(c.text());
    expect(pc.verdict == Verdict::ConditionallyCooperative, "conditional pair verdict " + to_string(pc.verdict));
    expect(texts == std::set<std::string>{"k_b1*c_D >= k_f1*c_B", "k_f2*c_A >= k_f2*c_C"}, "conditional inequalities differ");

    const auto ex1 = load("example1_chemostat.json");
    expect(classify_system(ex1, chemostat_flows(ex1)).system_verdict == SystemVerdict::Cooperative,
           "chemostat not cooperative");

    const auto ex2 = load("example2_futile_cycle.json");
    const auto e2 = classify_system(ex2, batch(ex2));
    bool all_disjoint = e2.pairs.size() == 6;
    for (const auto& p : e2.pairs) all_disjoint &= p.verdict == Verdict::Cooperative && basis_label(p.basis) == "Proposition 3";
    expect(e2.system_verdict == SystemVerdict::Cooperative && all_disjoint, "futile cycle pairs not all disjoint-reactant cooperative");

    const double secs = seconds_since(t0);
    expect(secs < 1.0, "runtime " + std::to_string(secs) + " s");
    why << "6 fixtures in " << secs << " s";
    return {ok, why.str()};
}

Outcome ac2() {
    const auto t0 = Clock::now();
    const std::vector<std::string> files{"parallel.json", "series.json", "conditional.json", "example1_chemostat.json",
                                         "example2_futile_cycle.json", "parallel_cstr.json"};
    std::mt19937_64 rng(2024);
    std::size_t states = 0, entries = 0, bad = 0;
    double worst = 0.0;
    for (const auto& f : files) {
        const auto net = load(f);
        const auto flows = FlowProfile::constant(Vector::Constant(static_cast<Eigen::Index>(net.num_inlets()), 0.15), 0.3);
        for (int k = 0; k < 40; ++k) {
            const auto xs = support::random_admissible_state(net, rng);
            const double vol = 0.5 + 0.1 * k;
            const auto rep = assemble_jacobian(net, xs, flows, vol, 0.0);
            const Matrix fd = support::fd_jacobian(net, xs, flows, vol, 0.0);
            for (Eigen::Index r = 0; r < fd.rows(); ++r)
                for (Eigen::Index c = 0; c < fd.cols(); ++c) {
                    const double err = std::abs(rep.J(r, c) - fd(r, c));
                    const double allowed = std::max(1e-5 * std::abs(fd(r, c)), 1e-8);
                    worst = std::max(worst, err / allowed);
                    bad += err > allowed;
                    ++entries;
                }
            ++states;
        }
    }
    const double secs = seconds_since(t0);
    std::ostringstream why;
    why << states << " states, " << files.size() << " networks, " << entries << " entries, " << bad
        << " outside tolerance (worst " << worst << " of allowed), " << secs << " s";
    return {bad == 0 && states >= 200 && secs < 30.0, why.str()};
}

Outcome ac3() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> flow(1e-3, 5.0);
    std::size_t states = 0, entries = 0, violations = 0;
    for (const char* f : {"example1_chemostat.json", "parallel_cstr.json"}) {
        const auto net = load(f);
        for (int k = 0; k < 500; ++k) {
            const auto xs = support::random_admissible_state(net, rng, 0.0);
            const auto flows = FlowProfile::constant(Vector::Constant(static_cast<Eigen::Index>(net.num_inlets()), flow(rng)),
                                                     flow(rng));
            const auto rep = flow_subsystem_check(net, flows, {xs});
            states += rep.states_checked;
            entries += rep.entries_checked;
            violations += rep.witnesses.size();
        }
    }
    std::ostringstream why;
    why << states << " states with m > 0 and u_out > 0, " << entries << " off-diagonal entries, " << violations
        << " violations";
    return {states >= 1000 && violations == 0, why.str()};
}

Outcome ac4() {
    const auto ex1 = load("example1_chemostat.json");
    const auto ex2 = load("example2_futile_cycle.json");
    const auto flows1 = chemostat_flows(ex1);
    const auto a1 = cross_validate(ex1, flows1, 1.0, span(20.0, 1e-3));
    const auto a2 = cross_validate(ex2, FlowProfile::batch(0), 1.0, span(10.0, 1e-3));
    const auto h1 = cross_validate(ex1, flows1, 1.0, span(20.0, 5e-4));
    const auto h2 = cross_validate(ex2, FlowProfile::batch(0), 1.0, span(10.0, 5e-4));
    const bool small = a1.max_deviation < 1e-6 && a2.max_deviation < 1e-6;
    auto ratio = [](double coarse, double fine) { return fine > 0.0 ? coarse / fine : std::numeric_limits<double>::infinity(); };
    const double r1 = ratio(a1.max_deviation, h1.max_deviation);
    const double r2 = ratio(a2.max_deviation, h2.max_deviation);
    const bool converges = r1 >= 8.0 && r1 <= 32.0 && r2 >= 8.0 && r2 <= 32.0;
    std::ostringstream why;
    why << "deviation chemostat " << a1.max_deviation << ", futile cycle " << a2.max_deviation << " (< 1e-6: "
        << (small ? "yes" : "no") << "); halving dt ratio " << r1 << " and " << r2 << " (in [8, 32]: "
        << (converges ? "yes" : "no") << ")";
    return {small && converges, why.str()};
}

Outcome ac5() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(42);
    std::ostringstream why;
    bool ok = true;

    auto run_chains = [&](const ReactionNetwork& net, const FlowProfile& flows, double t1, std::size_t count) {
        std::size_t preserved = 0;
        std::optional<OrderViolation> first;
        for (std::size_t c = 0; c < count; ++c) {
            const auto chain = make_ordered_chain(net, ExtentState::origin(net), 3, rng);
            const auto res = monotone_order_test(net, flows, 1.0, chain, span(t1, 1e-3));
            if (res.preserved)
                ++preserved;
            else if (!first)
                first = res.first_violation;
        }
        return std::make_pair(preserved, first);
    };

    const auto ex1 = load("example1_chemostat.json");
    const auto [p1, v1] = run_chains(ex1, chemostat_flows(ex1), 20.0, 20);
    const auto ex2 = load("example2_futile_cycle.json");
    const auto [p2, v2] = run_chains(ex2, FlowProfile::batch(0), 10.0, 20);
    const auto par = load("parallel.json");
    const auto [p3, v3] = run_chains(par, FlowProfile::batch(0), 10.0, 20);
    ok = p1 == 20 && p2 == 20 && v3.has_value();
    why << "chemostat " << p1 << "/20, futile cycle " << p2 << "/20 preserved; parallel " << 20 - p3 << "/20 violated";
    if (v3) why << " (first in " << v3->component_name << " at t = " << v3->t << ")";
    const double secs = seconds_since(t0);
    why << ", " << secs << " s";
    return {ok && secs < 60.0, why.str()};
}

Outcome ac6() {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> conc(0.05, 5.0), k(0.1, 4.0), a(0.05, 3.0);
    std::uniform_int_distribution<int> expo(1, 3), coin(0, 1);
    std::size_t bad = 0, mm = 0;
    for (int trial = 0; trial < 100; ++trial) {
        RateLaw law;
        law.k_f = k(rng);
        if (trial % 3 == 0) {
            law.fwd_exponents = {{0, 1.0}};
            law.denom = {{0, {a(rng), 1.0}}};
            ++mm;
        } else {
            law.k_b = coin(rng) ? k(rng) : 0.0;
            law.fwd_exponents = {{0, double(expo(rng))}, {1, coin(rng) ? 0.5 : double(expo(rng))}};
            law.bwd_exponents = {{2, double(expo(rng))}};
            if (coin(rng)) law.denom[1] = {a(rng), double(expo(rng))};
        }
        Vector c(3);
        for (Eigen::Index s = 0; s < 3; ++s) c(s) = conc(rng);
        const Vector g = rate_gradient(law, c);
        for (Eigen::Index s = 0; s < 3; ++s) {
            const double h = 1e-6 * std::max(1.0, c(s));
            Vector cp = c, cm = c;
            cp(s) += h;
            cm(s) -= h;
            const double fd = (eval_rate(law, cp) - eval_rate(law, cm)) / (2.0 * h);
            bad += std::abs(g(s) - fd) > 1e-6 * std::max(1.0, std::abs(fd));
        }
    }
    double worst_half = 0.0;
    for (double ks : {0.01, 0.5, 1.0, 3.0, 250.0})
        for (double mu : {0.2, 1.0, 7.5}) {
            RateLaw law;
            law.k_f = mu;
            law.fwd_exponents = {{0, 1.0}};
            law.denom = {{0, {ks, 1.0}}};
            Vector c(1);
            c << ks;
            worst_half = std::max(worst_half, std::abs(eval_rate(law, c) - mu / 2.0));
        }
    std::ostringstream why;
    why << "100 laws (" << mm << " Michaelis-Menten), " << bad << " gradient entries outside 1e-6; half-saturation error "
        << worst_half;
    return {bad == 0 && worst_half <= 1e-12, why.str()};
}

Outcome ac7() {
    const auto net = load("conditional.json");
    std::mt19937_64 rng(77);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const auto xs = support::random_admissible_state(net, rng);
        const double vol = 0.5 + 0.01 * k;
        const auto chk = check_conditional(net, 0, 1, xs, vol);
        const auto rep = assemble_jacobian(net, xs, FlowProfile::batch(0), vol, 0.0);
        worst = std::max({worst, std::abs(chk.margin_ij - rep.J(0, 1)), std::abs(chk.margin_ji - rep.J(1, 0))});
    }
    std::ostringstream why;
    why << "200 states, max |margin - J entry| = " << worst;
    return {worst <= 1e-10, why.str()};
}

Outcome ac8() {
    struct Case {
        std::string network, flows;
    };
    const std::vector<Case> cases{{"parallel.json", ""},           {"flipped_parallel.json", ""},
                                  {"series.json", ""},             {"conditional.json", ""},
                                  {"example1_chemostat.json", "example1_flows.json"},
                                  {"example2_futile_cycle.json", ""}, {"parallel_cstr.json", "parallel_cstr_flows.json"}};
    const std::vector<std::string> commands{"validate", "classify", "jacobian --at 0.5", "simulate --t1 2 --dt 0.01",
                                            "cross-validate --t1 2 --dt 0.01",
                                            "monotone --chains 3 --t1 1 --dt 0.01"};
    std::size_t reports = 0, unstable = 0, failed = 0;
    std::string first_bad;
    for (const auto& cs : cases)
        for (const auto& cmd : commands) {
            std::string args = cmd + " --format json --seed 42 --network " + support::fixture(cs.network);
            if (!cs.flows.empty()) args += " --flows " + support::fixture(cs.flows);
            const auto a = support::run_cli(args), b = support::run_cli(args);
            ++reports;
            if (a.exit_code != 0 || b.exit_code != 0) {
                ++failed;
                if (first_bad.empty()) first_bad = args;
            } else if (a.out != b.out || a.out.empty()) {
                ++unstable;
                if (first_bad.empty()) first_bad = args;
            }
        }
    std::ostringstream why;
    why << reports << " JSON reports, " << unstable << " differ between runs, " << failed << " failed";
    if (!first_bad.empty()) why << " (first: " << first_bad << ")";
    return {unstable == 0 && failed == 0, why.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"ac1", ac1}, {"ac2", ac2}, {"ac3", ac3}, {"ac4", ac4}, {"ac5", ac5}, {"ac6", ac6}, {"ac7", ac7}, {"ac8", ac8}};
    const std::string only = argc > 1 ? argv[1] : "";
    bool all_pass = true, ran = false;
    for (const auto& [name, fn] : criteria) {
        if (!only.empty() && only != name) continue;
        ran = true;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::string upper = name;
        for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        std::cout << upper << " " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
        all_pass &= o.pass;
    }
    if (!ran) {
        std::cerr << "unknown criterion '" << only << "'\n";
        return 2;
    }
    return all_pass ? 0 : 1;
}
