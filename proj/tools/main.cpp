#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "compas/community.hpp"
#include "compas/evaluation.hpp"
#include "compas/report.hpp"
#include "compas/runner.hpp"
#include "compas/stream_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace compas;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct InputOptions {
    std::string input;
    std::string format = "auto";
    std::string generate;
    std::uint64_t graph_seed = 0;
    std::string labels;
    std::optional<std::uint64_t> shuffle;
};

struct Input {
    EdgeStream stream;
    std::optional<GroundTruthLabels> labels;
};

struct SampleOptions {
    std::vector<std::string> algos{"compas"};
    double sample_frac = 0.4;
    std::size_t sample_n = 0;
    double alpha = 0.4;
    double buffer_frac = 0.0075;
    std::size_t window = 0;
    std::vector<std::uint64_t> seeds{0};
    bool strict_line12 = false;
    std::size_t trace_every = 0;
};

struct TruthOptions {
    std::string truth = "louvain";
    std::string nmi_norm = "mean";
};

std::string g_invocation;

void add_input_options(CLI::App* cmd, InputOptions& o) {
    cmd->add_option("--input", o.input, "Edge stream file ('u v' or 'u v t' lines)");
    cmd->add_option("--format", o.format, "Input format")
        ->check(CLI::IsMember({"auto", "plain", "timestamped"}));
    cmd->add_option("--generate", o.generate, "Planted partition n,k,p_in,p_out");
    cmd->add_option("--graph-seed", o.graph_seed, "Generator seed for --generate");
    cmd->add_option("--labels", o.labels, "Ground-truth label file for --input");
    cmd->add_option("--shuffle", o.shuffle, "Randomize arrival order with this seed");
}

void add_sample_options(CLI::App* cmd, SampleOptions& o) {
    cmd->add_option("--algo", o.algos, "compas, sn, se, sbfs or pies (repeatable)");
    cmd->add_option("--sample-frac", o.sample_frac, "Sample size as a fraction of |V|");
    cmd->add_option("--sample-n", o.sample_n, "Absolute sample size (overrides --sample-frac)");
    cmd->add_option("--alpha", o.alpha, "Warm-up fraction of n");
    cmd->add_option("--buffer-frac", o.buffer_frac, "Buffer capacity as a fraction of n");
    cmd->add_option("--window", o.window, "SBFS window in edges (0: 10n)");
    cmd->add_option("--seed", o.seeds, "Sampler seed (repeatable)");
    cmd->add_flag("--strict-line12", o.strict_line12, "Drop the event that triggers detection");
    cmd->add_option("--trace-every", o.trace_every, "ComPAS trace interval in events");
}

void add_truth_options(CLI::App* cmd, TruthOptions& o) {
    cmd->add_option("--truth", o.truth, "Ground truth source")
        ->check(CLI::IsMember({"louvain", "labels"}));
    cmd->add_option("--nmi-norm", o.nmi_norm, "NMI normalization")
        ->check(CLI::IsMember({"mean", "max"}));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

PlantedPartitionParams parse_generate(const std::string& spec, std::uint64_t seed) {
    const auto parts = split(spec, ',');
    if (parts.size() != 4) throw ConfigError("--generate expects n,k,p_in,p_out");
    PlantedPartitionParams p;
    try {
        p.n_nodes = std::stoull(parts[0]);
        p.k_comms = std::stoull(parts[1]);
        p.p_in = std::stod(parts[2]);
        p.p_out = std::stod(parts[3]);
    } catch (const std::exception&) {
        throw ConfigError("--generate: cannot parse '" + spec + "'");
    }
    p.seed = seed;
    return p;
}

EdgeFileFormat parse_format(const std::string& f) {
    if (f == "plain") return EdgeFileFormat::kPlain;
    if (f == "timestamped") return EdgeFileFormat::kTimestamped;
    return EdgeFileFormat::kAuto;
}

Input load_input(const InputOptions& o) {
    if (o.input.empty() == o.generate.empty()) {
        throw ConfigError("give exactly one of --input and --generate");
    }
    Input in;
    if (!o.generate.empty()) {
        auto pp = generate_planted_partition(parse_generate(o.generate, o.graph_seed));
        in.stream = std::move(pp.stream);
        in.labels = std::move(pp.labels);
    } else {
        in.stream = load_edge_stream(o.input, parse_format(o.format));
        if (!o.labels.empty()) in.labels = load_labels(o.labels);
    }
    if (o.shuffle) in.stream = randomize_order(in.stream, *o.shuffle);
    return in;
}

GroundTruth make_truth(const Input& in, const TruthOptions& t, std::uint64_t seed) {
    if (t.truth == "labels") {
        if (!in.labels) throw ConfigError("--truth labels needs --labels or --generate");
        return ground_truth_from_labels(in.stream, *in.labels);
    }
    return ground_truth(in.stream, seed);
}

NmiNorm parse_norm(const std::string& s) {
    return s == "max" ? NmiNorm::kMax : NmiNorm::kArithmeticMean;
}

std::vector<RunConfig> run_configs(const SampleOptions& o) {
    if (o.algos.empty()) throw ConfigError("no algorithm given");
    if (o.seeds.empty()) throw ConfigError("no seed given");
    std::vector<RunConfig> out;
    for (const auto& a : o.algos) {
        for (std::uint64_t seed : o.seeds) {
            RunConfig c;
            c.algorithm = parse_algorithm(a);
            c.sample_n = o.sample_n;
            c.sample_frac = o.sample_frac;
            c.alpha = o.alpha;
            c.buffer_frac = o.buffer_frac;
            c.window = o.window;
            c.seed = seed;
            c.strict_line12 = o.strict_line12;
            c.trace_every = o.trace_every;
            c.validate();
            out.push_back(c);
        }
    }
    return out;
}

// Effective options, one "name=value" per line; unset options are left out.
std::string options_text(const CLI::App* cmd) {
    std::string out;
    for (const auto& line : split(cmd->config_to_str(true, false), '\n')) {
        if (!line.empty() && !line.ends_with("=\"\"")) out += line + "\n";
    }
    return out;
}

std::string header(const CLI::App* cmd) { return "command: " + g_invocation + "\n" + options_text(cmd); }

std::string commented(const std::string& text) {
    std::string out;
    for (const auto& line : split(text, '\n')) out += "# " + line + "\n";
    return out;
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json config_json(const CLI::App* cmd) {
    return json{{"command", g_invocation}, {"options", options_text(cmd)}};
}

json run_config_json(const RunConfig& c) {
    json j = json::object();
    for (const auto& [k, v] : c.describe()) j[k] = v;
    return j;
}

std::string run_stem(const RunConfig& c) {
    return std::string(algorithm_name(c.algorithm)) + "_seed" + std::to_string(c.seed);
}

MetricReport evaluate_run(const RunOutput& run, const GroundTruth& truth, NmiNorm norm,
                          const std::string& run_id) {
    MetricReport r = metric_report(run.graph, run.partition, truth.graph, truth.partition, norm, run_id);
    if (run.louvain_applied) r.notes.push_back("louvain applied to sample without partition");
    return r;
}

// ---------------------------------------------------------------------------

int cmd_generate(const CLI::App* cmd, const std::string& spec, std::uint64_t seed,
                 const std::string& out_dir) {
    const auto pp = generate_planted_partition(parse_generate(spec, seed));
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const std::string h = header(cmd);
    write_stream_file(dir / "edges.txt", pp.stream, h);
    write_labels(dir / "labels.txt", pp.labels, h);
    std::cout << "wrote " << pp.stream.size() << " edges over " << pp.labels.size()
              << " nodes to " << dir.string() << "\n";
    return kOk;
}

int cmd_sample(const CLI::App* cmd, const InputOptions& io, const SampleOptions& so,
               const std::string& out_dir) {
    const Input in = load_input(io);
    const auto configs = run_configs(so);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    std::optional<SampleGraph> aggregate;
    const std::string h = header(cmd);
    for (const auto& c : configs) {
        if (c.algorithm == Algorithm::kStreamingEdge && !aggregate) aggregate = aggregate_graph(in.stream);
        const RunOutput run = run_sampler(in.stream, c, aggregate ? &*aggregate : nullptr);
        const std::string stem = run_stem(c);
        const auto edges = run.graph.edges();
        write_edge_file(dir / (stem + ".edges"), edges, h);
        std::string nodes = commented(h);
        for (NodeId x : run.graph.nodes()) nodes += std::to_string(x) + "\n";
        write_file(dir / (stem + ".nodes"), nodes);
        if (!run.louvain_applied) {
            write_file(dir / (stem + ".partition"), commented(h) + assignment_text(run.partition));
        }
        json meta{{"config", config_json(cmd)},
                  {"run", run_config_json(c)},
                  {"n", run.n},
                  {"budget", run.budget},
                  {"counters", run.counters},
                  {"nodes", run.graph.node_count()},
                  {"edges", run.graph.edge_count()},
                  {"seconds", run.seconds}};
        if (!run.louvain_applied) {
            meta["communities"] = run.partition.community_count();
            meta["modularity"] = run.graph.edge_count() > 0 ? run.partition.modularity() : 0.0;
        }
        Diagnostics d;
        d.trace = run.trace;
        meta["trace"] = json::parse(to_json(d))["trace"];
        write_file(dir / (stem + ".meta.json"), meta.dump(2) + "\n");
        std::cout << stem << ": " << run.graph.node_count() << " nodes, "
                  << run.graph.edge_count() << " edges\n";
    }
    return kOk;
}

int cmd_evaluate(const CLI::App* cmd, const InputOptions& io, const TruthOptions& to,
                 const std::vector<std::string>& samples, std::uint64_t seed,
                 const std::string& out_dir, std::size_t buckets) {
    if (samples.empty()) throw ConfigError("no sample files given");
    const Input in = load_input(io);
    const GroundTruth truth = make_truth(in, to, seed);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    std::map<std::string, std::vector<MetricReport>> groups;
    for (const auto& file : samples) {
        const fs::path path(file);
        fs::path base = path;
        base.replace_extension();
        const std::string stem = base.filename().string();

        SampleGraph graph;
        const fs::path nodes_file = fs::path(base).concat(".nodes");
        if (fs::exists(nodes_file)) {
            for (const auto& line : split(read_file(nodes_file), '\n')) {
                if (line.empty() || line[0] == '#') continue;
                NodeId x = 0;
                try {
                    x = std::stoull(line);
                } catch (const std::exception&) {
                    throw DataError(nodes_file.string() + ": bad node id '" + line + "'");
                }
                if (!graph.contains(x)) graph.add_node(x);
            }
        }
        const std::string text = read_file(path);
        bool any_edge = false;
        for (const auto& line : split(text, '\n')) {
            if (line.find_first_not_of(" \t\r") != std::string::npos && line[0] != '#') any_edge = true;
        }
        if (any_edge) {
            const EdgeStream s = parse_edge_stream(text, EdgeFileFormat::kAuto, path.string());
            for (const auto& e : s.events) {
                if (!graph.contains(e.u)) graph.add_node(e.u);
                if (!graph.contains(e.v)) graph.add_node(e.v);
                graph.add_edge(e.u, e.v);
            }
        }
        if (graph.empty()) throw DataError(path.string() + ": sample is empty");

        RunOutput run;
        run.graph = std::move(graph);
        const fs::path part_file = fs::path(base).concat(".partition");
        if (fs::exists(part_file)) {
            const auto labels = load_labels(part_file);
            std::unordered_map<NodeId, CommunityId> a(labels.begin(), labels.end());
            for (NodeId x : run.graph.nodes()) {
                if (!a.contains(x)) throw DataError(part_file.string() + ": node " + std::to_string(x) + " has no community");
            }
            run.partition = Partition::from_assignment(run.graph, a);
        } else if (run.graph.edge_count() > 0) {
            LouvainOptions opts;
            opts.seed = seed;
            run.partition = louvain(run.graph, opts);
            run.louvain_applied = true;
        } else {
            run.partition = Partition::singletons(run.graph);
            run.louvain_applied = true;
        }

        std::string group = "all";
        const fs::path meta_file = fs::path(base).concat(".meta.json");
        if (fs::exists(meta_file)) {
            const json meta = json::parse(read_file(meta_file), nullptr, false);
            if (meta.is_discarded()) throw DataError(meta_file.string() + ": malformed JSON");
            if (meta.contains("run") && meta["run"].contains("algo")) group = meta["run"]["algo"];
            if (meta.contains("trace")) {
                for (const auto& p : meta["trace"]) {
                    run.trace.push_back({p.at("t").get<std::uint64_t>(), p.at("nodes").get<std::size_t>(),
                                         p.at("edges").get<std::size_t>(), p.at("modularity").get<double>(),
                                         p.at("mean_clustering").get<double>(),
                                         p.at("mean_degree").get<double>()});
                }
            }
        }

        MetricReport r = evaluate_run(run, truth, parse_norm(to.nmi_norm), stem);
        json rep = json::parse(to_json(r));
        rep["config"] = config_json(cmd);
        write_file(dir / (stem + ".report.json"), rep.dump(2) + "\n");
        json diag = json::parse(to_json(diagnostics(in.stream, truth, run.graph, run.partition, run.trace, buckets)));
        diag["config"] = config_json(cmd);
        write_file(dir / (stem + ".diagnostics.json"), diag.dump(2) + "\n");
        std::cout << stem << ": avg_d=" << r.avg_d << " nmi=" << r.nmi << " ari=" << r.ari
                  << " purity=" << r.purity << "\n";
        groups[group].push_back(std::move(r));
    }
    json agg = json::object();
    agg["config"] = config_json(cmd);
    for (const auto& [group, reports] : groups) agg[group] = json::parse(to_json(summarize_reports(reports)));
    write_file(dir / "aggregate.json", agg.dump(2) + "\n");
    return kOk;
}

int cmd_compare(const CLI::App* cmd, const InputOptions& io, const SampleOptions& so,
                const TruthOptions& to, const std::string& out) {
    const Input in = load_input(io);
    const auto configs = run_configs(so);
    const GroundTruth truth = make_truth(in, to, so.seeds.front());
    std::map<std::string, std::vector<MetricReport>> per_algo;
    std::vector<std::string> order;
    for (const auto& c : configs) {
        const std::string name(algorithm_name(c.algorithm));
        if (!per_algo.contains(name)) order.push_back(name);
        const RunOutput run = run_sampler(in.stream, c, &truth.graph);
        per_algo[name].push_back(evaluate_run(run, truth, parse_norm(to.nmi_norm), run_stem(c)));
    }
    std::vector<std::pair<std::string, MetricReport>> rows;
    for (const auto& name : order) rows.emplace_back(name, summarize_reports(per_algo[name]).mean);
    const std::string csv = commented(header(cmd)) + compare_csv(rows);
    if (out.empty()) std::cout << csv;
    else write_file(out, csv);
    return kOk;
}

int cmd_perturb(const CLI::App* cmd, const InputOptions& io, const SampleOptions& so,
                const TruthOptions& to, const std::vector<double>& ys, const std::string& out) {
    if (ys.empty()) throw ConfigError("no perturbation levels given");
    const Input in = load_input(io);
    const auto configs = run_configs(so);
    const GroundTruth truth = make_truth(in, to, so.seeds.front());
    std::ostringstream csv;
    csv << commented(header(cmd)) << "algo,y,seed,avg_d,sd_d,nmi,ari,purity\n";
    for (const auto& c : configs) {
        for (double y : ys) {
            const EdgeStream s = perturb_order(in.stream, y, c.seed);
            const RunOutput run = run_sampler(s, c, &truth.graph);
            const MetricReport r = evaluate_run(run, truth, parse_norm(to.nmi_norm), run_stem(c));
            csv << algorithm_name(c.algorithm) << ',' << y << ',' << c.seed << ',' << r.avg_d << ','
                << r.sd_d << ',' << r.nmi << ',' << r.ari << ',' << r.purity << '\n';
        }
    }
    if (out.empty()) std::cout << csv.str();
    else write_file(out, csv.str());
    return kOk;
}

int cmd_scale(const CLI::App* cmd, const InputOptions& io, const SampleOptions& so,
              std::size_t base_edges, const std::vector<double>& multipliers, std::size_t reps,
              const std::string& out) {
    if (multipliers.empty()) throw ConfigError("no size multipliers given");
    const Input in = load_input(io);
    const auto configs = run_configs(so);
    const std::size_t total_nodes = in.stream.node_count();
    std::optional<SampleGraph> aggregate;
    std::ostringstream csv;
    csv << commented(header(cmd)) << "algo,seed,multiplier,events,nodes,seconds\n";
    std::ostringstream fits;
    for (const auto& c : configs) {
        if (c.algorithm == Algorithm::kStreamingEdge && !aggregate) aggregate = aggregate_graph(in.stream);
        const auto points = scale_study(in.stream, base_edges, multipliers, reps, [&] {
            return make_sampler(c, total_nodes, aggregate ? &*aggregate : nullptr);
        });
        std::vector<double> x;
        std::vector<double> y;
        for (const auto& p : points) {
            csv << algorithm_name(c.algorithm) << ',' << c.seed << ',' << p.multiplier << ','
                << p.events << ',' << p.nodes << ',' << p.seconds << '\n';
            x.push_back(static_cast<double>(p.events));
            y.push_back(p.seconds);
        }
        std::vector<double> distinct = x;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        if (distinct.size() < 2) {
            std::cerr << "warning: a single stream size, linear fit skipped\n";
            continue;
        }
        const LinearFit f = linear_fit(x, y);
        fits << "# fit " << algorithm_name(c.algorithm) << " seed=" << c.seed << " slope=" << f.slope
             << " intercept=" << f.intercept << " r2=" << f.r2 << "\n";
        for (std::size_t i = 0; i < points.size(); ++i) {
            for (std::size_t j = 0; j < points.size(); ++j) {
                if (points[j].multiplier == 2.0 * points[i].multiplier && points[i].seconds > 0.0) {
                    fits << "# ratio " << points[j].multiplier << "x/" << points[i].multiplier
                         << "x=" << points[j].seconds / points[i].seconds << "\n";
                }
            }
        }
    }
    const std::string text = csv.str() + fits.str();
    if (out.empty()) std::cout << text;
    else write_file(out, text);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 0; i < argc; ++i) g_invocation += (i ? " " : "") + std::string(i ? argv[i] : "compas");

    CLI::App app{"Community-preserving streaming graph sampling"};
    app.require_subcommand(1);

    std::string gen_spec;
    std::uint64_t gen_seed = 0;
    std::string gen_out = ".";
    auto* gen = app.add_subcommand("generate", "Write a planted-partition stream and its labels");
    gen->add_option("--generate", gen_spec, "n,k,p_in,p_out")->required();
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--out", gen_out, "Output directory");

    InputOptions s_in;
    SampleOptions s_opt;
    std::string s_out = "samples";
    auto* sample = app.add_subcommand("sample", "Run samplers and write samples");
    add_input_options(sample, s_in);
    add_sample_options(sample, s_opt);
    sample->add_option("--out", s_out, "Output directory");

    InputOptions e_in;
    TruthOptions e_truth;
    std::vector<std::string> e_samples;
    std::uint64_t e_seed = 0;
    std::string e_out = "reports";
    std::size_t e_buckets = 500;
    auto* evaluate = app.add_subcommand("evaluate", "Score sample files against the ground truth");
    add_input_options(evaluate, e_in);
    add_truth_options(evaluate, e_truth);
    evaluate->add_option("samples", e_samples, "Sample edge files written by 'sample'")->required();
    evaluate->add_option("--seed", e_seed, "Louvain seed");
    evaluate->add_option("--buckets", e_buckets, "Arrival-profile bucket count");
    evaluate->add_option("--out", e_out, "Output directory");

    InputOptions c_in;
    SampleOptions c_opt;
    TruthOptions c_truth;
    std::string c_out;
    auto* compare = app.add_subcommand("compare", "Compare algorithms over seeds (CSV)");
    add_input_options(compare, c_in);
    add_sample_options(compare, c_opt);
    add_truth_options(compare, c_truth);
    compare->add_option("--out", c_out, "Output CSV (default stdout)");

    InputOptions p_in;
    SampleOptions p_opt;
    TruthOptions p_truth;
    std::vector<double> p_ys{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
    std::string p_out;
    auto* perturb = app.add_subcommand("perturb-study", "Average D against edge-order perturbation");
    add_input_options(perturb, p_in);
    add_sample_options(perturb, p_opt);
    add_truth_options(perturb, p_truth);
    perturb->add_option("--y", p_ys, "Perturbation levels")->delimiter(',');
    perturb->add_option("--out", p_out, "Output CSV (default stdout)");

    InputOptions b_in;
    SampleOptions b_opt;
    std::size_t b_base = 50000;
    std::vector<double> b_mult{1, 2, 4, 8};
    std::size_t b_reps = 3;
    std::string b_out;
    auto* scale = app.add_subcommand("scale-bench", "Wall time against stream size (CSV)");
    add_input_options(scale, b_in);
    add_sample_options(scale, b_opt);
    scale->add_option("--base-edges", b_base, "Events in the 1x prefix");
    scale->add_option("--multipliers", b_mult, "Prefix sizes as multiples of the base")->delimiter(',');
    scale->add_option("--reps", b_reps, "Repetitions per size (median reported)");
    scale->add_option("--out", b_out, "Output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (gen->parsed()) return cmd_generate(gen, gen_spec, gen_seed, gen_out);
        if (sample->parsed()) return cmd_sample(sample, s_in, s_opt, s_out);
        if (evaluate->parsed()) {
            return cmd_evaluate(evaluate, e_in, e_truth, e_samples, e_seed, e_out, e_buckets);
        }
        if (compare->parsed()) return cmd_compare(compare, c_in, c_opt, c_truth, c_out);
        if (perturb->parsed()) return cmd_perturb(perturb, p_in, p_opt, p_truth, p_ys, p_out);
        if (scale->parsed()) return cmd_scale(scale, b_in, b_opt, b_base, b_mult, b_reps, b_out);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}
