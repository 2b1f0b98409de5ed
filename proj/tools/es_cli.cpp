// Command-line front end: generation, randomization, mixing analysis,
// uniformity verification, benchmarking.
//
// Exit codes: 0 success, 2 invalid input/config, 3 internal invariant
// violation.
#include <CLI11.hpp>

#include <es/chain_sequential.hpp>
#include <es/eager_es.hpp>
#include <es/generators.hpp>
#include <es/io.hpp>
#include <es/mixing.hpp>
#include <es/steady_global_es.hpp>
#include <es/verify.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace es;

constexpr int kExitBadInput = 2;
constexpr int kExitInternal = 3;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
    if (seed)
        return *seed;
    std::random_device rd;
    const std::uint64_t s = (std::uint64_t(rd()) << 32) | rd();
    std::cerr << "seed: " << s << "\n";
    return s;
}

unsigned default_threads() {
    return std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), kMaxThreads);
}

DegreeSequence parse_degrees(const std::string& text) {
    DegreeSequence d;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        d.push_back(node_t(std::stoul(item)));
    return d;
}

ThinningSchedule parse_schedule(const std::string& text) {
    ThinningSchedule k;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        k.push_back(std::uint32_t(std::stoul(item)));
    return k;
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_graph_stats(const EdgeList& g) {
    const auto d = degree_sequence_of(g);
    node_t max_deg = 0;
    for (const auto deg : d)
        max_deg = std::max(max_deg, deg);
    std::cout << "nodes: " << g.num_nodes << "\nedges: " << g.num_edges()
              << "\nmax degree: " << max_deg << "\n";
}

struct RandomizeResult {
    ChainCounters counters;
    std::vector<std::uint32_t> rounds; // steady-global-es only
};

RandomizeResult run_algorithm(EdgeList& g, SampleAlgo algo, std::uint64_t supersteps,
                              unsigned threads, double p_lazy, std::uint64_t seed) {
    RandomizeResult r;
    switch (algo) {
    case SampleAlgo::Es: {
        ChainState state(std::move(g));
        RandomEsSource source{RandomStream(seed)};
        run_es_supersteps(state, supersteps, source);
        r.counters = state.counters();
        g = state.graph();
        break;
    }
    case SampleAlgo::GlobalEs: {
        ChainState state(std::move(g));
        RandomGlobalSource source(RandomStream(seed), p_lazy);
        run_global_es(state, supersteps, source);
        r.counters = state.counters();
        g = state.graph();
        break;
    }
    case SampleAlgo::EagerEs: {
        EagerEs eager(threads);
        r.counters = eager.run(g, supersteps * es_superstep_switches(g.num_edges()), seed);
        r.counters.supersteps = supersteps;
        break;
    }
    case SampleAlgo::SteadyGlobalEs: {
        SteadyGlobalEs steady(threads);
        auto stats = steady.run(g, supersteps, p_lazy, seed);
        r.counters = stats.counters;
        r.rounds = std::move(stats.rounds_per_superstep);
        break;
    }
    }
    return r;
}

int cmd_gen(const std::string& kind, node_t n, double p, double gamma, const std::string& out,
            const std::optional<std::uint64_t>& seed_opt) {
    RandomStream rng(resolve_seed(seed_opt));
    EdgeList g;
    if (kind == "gnp") {
        g = gen_gnp(n, p, rng);
    } else {
        g = havel_hakimi(sample_pld_degrees(n, gamma, rng));
    }
    write_edge_list(out, g);
    print_graph_stats(g);
    return 0;
}

int cmd_randomize(const std::string& input, const std::string& output, SampleAlgo algo,
                  std::uint64_t supersteps, unsigned threads, double p_lazy, bool sanitize,
                  bool sort_output, const std::optional<std::uint64_t>& seed_opt) {
    auto g = read_edge_list(input, sanitize);
    const auto degrees = degree_sequence_of(g);
    const auto seed = resolve_seed(seed_opt);

    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_algorithm(g, algo, supersteps, threads, p_lazy, seed);
    const double secs = elapsed(t0);

    if (degree_sequence_of(g) != degrees) {
        std::cerr << "internal error: degree sequence changed\n";
        return kExitInternal;
    }
    write_edge_list(output, g, sort_output);

    std::cout << "wall time: " << secs << " s\n"
              << "supersteps: " << supersteps << "\n"
              << "accepted: " << r.counters.accepted
              << ", rejected (loop): " << r.counters.rejected_loop
              << ", rejected (existing): " << r.counters.rejected_existing << "\n";
    if (!r.rounds.empty()) {
        std::cout << "rounds per superstep:";
        for (const auto rounds : r.rounds)
            std::cout << ' ' << rounds;
        std::cout << "\n";
    }
    return 0;
}

int cmd_analyze_mixing(const std::string& input, const std::string& report_path,
                       const std::string& algo_name, std::uint64_t supersteps,
                       const std::string& schedule_text, std::size_t runs, double p_lazy,
                       bool sanitize, const std::optional<std::uint64_t>& seed_opt) {
    if (algo_name != "es" && algo_name != "global-es")
        throw CLI::ValidationError("--algo", "analyze-mixing supports es and global-es");
    const auto g = read_edge_list(input, sanitize);
    const auto schedule = schedule_text.empty() ? default_schedule() : parse_schedule(schedule_text);
    const auto seed = resolve_seed(seed_opt);
    const auto algo = algo_name == "es" ? MixAlgo::Es : MixAlgo::GlobalEs;
    const auto report = analyze_mixing(g, algo, supersteps, schedule, runs, seed, p_lazy);
    if (report_path.empty() || report_path == "-") {
        write_mixing_csv(std::cout, report);
    } else {
        std::ofstream out(report_path);
        if (!out)
            throw IoError("cannot open " + report_path + " for writing");
        write_mixing_csv(out, report);
    }
    return 0;
}

int cmd_verify_uniformity(const std::string& degrees_text, const std::string& algo_name,
                          std::uint64_t samples, std::uint64_t supersteps, unsigned threads,
                          double p_lazy, const std::optional<std::uint64_t>& seed_opt) {
    const auto d = parse_degrees(degrees_text);
    const auto algo = parse_sample_algo(algo_name);
    const auto seed = resolve_seed(seed_opt);
    const auto space = enumerate_graphs(d);
    if (space.empty()) {
        std::cerr << "degree sequence is not graphical\n";
        return kExitBadInput;
    }
    if (space.size() == 1) {
        std::cout << "states: 1\nverdict: single realization, uniformity is trivial\n";
        return 0;
    }
    const auto hist = sample_distribution(algo, d, supersteps, samples, seed, threads, p_lazy);
    const auto r = chi_square_uniformity(hist, space.size());

    std::cout << "state,count\n";
    for (std::size_t i = 0; i < space.size(); ++i)
        std::cout << i << ',' << hist.counts[i] << '\n';
    std::cout << "states: " << space.size() << ", samples: " << hist.total
              << "\nchi-square: " << r.statistic << " (dof " << r.dof << ", critical "
              << r.critical_value << " at alpha 0.001)\nverdict: "
              << (r.pass ? "consistent with uniform" : "NOT uniform") << "\n";
    return r.pass ? 0 : kExitInternal;
}

int cmd_bench(const std::string& input, const std::string& algo_name, std::uint64_t supersteps,
              unsigned repetitions, unsigned threads, double p_lazy, bool sanitize,
              const std::optional<std::uint64_t>& seed_opt) {
    const auto algo = parse_sample_algo(algo_name);
    const auto g0 = read_edge_list(input, sanitize);
    const auto seed = resolve_seed(seed_opt);

    std::cout << "repetition,phase,seconds,mean_rounds,max_rounds\n";
    for (unsigned rep = 0; rep < repetitions; ++rep) {
        const auto t_init = std::chrono::steady_clock::now();
        auto g = g0; // per-repetition working copy: the initialization phase
        const double init_secs = elapsed(t_init);

        const auto t_run = std::chrono::steady_clock::now();
        const auto r = run_algorithm(g, algo, supersteps, threads, p_lazy,
                                     mix64(seed + rep));
        const double run_secs = elapsed(t_run);

        std::printf("%u,init,%.6f,,\n", rep, init_secs);
        if (!r.rounds.empty()) {
            double mean = 0;
            std::uint32_t max_rounds = 0;
            for (const auto rounds : r.rounds) {
                mean += rounds;
                max_rounds = std::max(max_rounds, rounds);
            }
            mean /= double(r.rounds.size());
            std::printf("%u,supersteps,%.6f,%.3f,%u\n", rep, run_secs, mean, max_rounds);
        } else {
            std::printf("%u,supersteps,%.6f,,\n", rep, run_secs);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uniform randomization of simple graphs with fixed degree sequence"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    unsigned threads = default_threads();
    double p_lazy = 0.01;
    std::uint64_t supersteps = 20;
    std::string algo = "steady-global-es";
    bool sanitize = false, sort_output = false;
    std::string input, output;

    // gen
    auto* gen = app.add_subcommand("gen", "generate a graph");
    std::string gen_kind;
    node_t gen_n = 0;
    double gen_p = 0.0, gen_gamma = 2.5;
    gen->add_option("kind", gen_kind, "gnp or pld")->required()->check(CLI::IsMember({"gnp", "pld"}));
    gen->add_option("-n,--nodes", gen_n, "node count")->required();
    gen->add_option("-p,--edge-probability", gen_p, "edge probability (gnp)");
    gen->add_option("--gamma", gen_gamma, "power-law exponent (pld)");
    gen->add_option("-o,--output", output, "output edge list")->required();
    gen->add_option("--seed", seed, "PRNG seed");

    // randomize
    auto* rnd = app.add_subcommand("randomize", "randomize a graph, preserving degrees");
    rnd->add_option("-i,--input", input, "input edge list")->required();
    rnd->add_option("-o,--output", output, "output edge list")->required();
    rnd->add_option("--algo", algo, "es | global-es | eager-es | steady-global-es");
    rnd->add_option("--supersteps", supersteps, "supersteps to run (default 20)");
    rnd->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, unsigned(kMaxThreads)));
    rnd->add_option("--pl", p_lazy, "lazy-rejection probability P_L")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    rnd->add_option("--seed", seed, "PRNG seed");
    rnd->add_flag("--sanitize", sanitize, "drop loops and duplicate edges on load");
    rnd->add_flag("--sort-output", sort_output, "sort output edges canonically");

    // analyze-mixing
    auto* mix = app.add_subcommand("analyze-mixing", "autocorrelation mixing diagnostic");
    std::string schedule_text;
    std::size_t runs = 1;
    mix->add_option("-i,--input", input, "input edge list")->required();
    mix->add_option("-o,--report", output, "CSV report path ('-' for stdout)");
    mix->add_option("--algo", algo, "es | global-es")->required();
    mix->add_option("--supersteps", supersteps, "supersteps per run");
    mix->add_option("--schedule", schedule_text, "comma-separated thinning values");
    mix->add_option("--runs", runs, "independent runs");
    mix->add_option("--pl", p_lazy, "lazy-rejection probability P_L");
    mix->add_option("--seed", seed, "PRNG seed");
    mix->add_flag("--sanitize", sanitize, "drop loops and duplicate edges on load");

    // verify-uniformity
    auto* ver = app.add_subcommand("verify-uniformity", "statistical uniformity check");
    std::string degrees_text;
    std::uint64_t samples = 120000;
    ver->add_option("--degrees", degrees_text, "comma-separated degree sequence")->required();
    ver->add_option("--algo", algo, "es | global-es | eager-es | steady-global-es");
    ver->add_option("--samples", samples, "independent chain runs");
    ver->add_option("--supersteps", supersteps, "supersteps per sample");
    ver->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, unsigned(kMaxThreads)));
    ver->add_option("--pl", p_lazy, "lazy-rejection probability P_L");
    ver->add_option("--seed", seed, "PRNG seed");

    // bench
    auto* bench = app.add_subcommand("bench", "timing benchmark");
    unsigned repetitions = 3;
    bench->add_option("-i,--input", input, "input edge list")->required();
    bench->add_option("--algo", algo, "es | global-es | eager-es | steady-global-es");
    bench->add_option("--supersteps", supersteps, "supersteps per repetition");
    bench->add_option("--repetitions", repetitions, "repetitions");
    bench->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, unsigned(kMaxThreads)));
    bench->add_option("--pl", p_lazy, "lazy-rejection probability P_L");
    bench->add_option("--seed", seed, "PRNG seed");
    bench->add_flag("--sanitize", sanitize, "drop loops and duplicate edges on load");

    try {
        app.parse(argc, argv);
        if (gen->parsed())
            return cmd_gen(gen_kind, gen_n, gen_p, gen_gamma, output, seed);
        if (rnd->parsed())
            return cmd_randomize(input, output, parse_sample_algo(algo), supersteps, threads,
                                 p_lazy, sanitize, sort_output, seed);
        if (mix->parsed())
            return cmd_analyze_mixing(input, output, algo, supersteps, schedule_text, runs,
                                      p_lazy, sanitize, seed);
        if (ver->parsed())
            return cmd_verify_uniformity(degrees_text, algo, samples, supersteps, threads,
                                         p_lazy, seed);
        if (bench->parsed())
            return cmd_bench(input, algo, supersteps, repetitions, threads, p_lazy, sanitize,
                             seed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitBadInput;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const NotGraphical& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const TooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return 0;
}
