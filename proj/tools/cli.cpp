#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>

#include <CLI11.hpp>
#include <tbb/global_control.h>

#include "cges/errors.hpp"
#include "cges/evaluation.hpp"
#include "cges/ges.hpp"
#include "cges/ring.hpp"

namespace cges::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return lines;
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::istringstream in{std::string(text)};
    for (std::string w; in >> w;) words.push_back(w);
    return words;
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::unique_ptr<tbb::global_control> thread_limit(std::size_t threads) {
    if (threads == 0) return nullptr;
    return std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism, threads);
}

// ---------------------------------------------------------------------------- learning

struct LearnSettings {
    std::string algorithm = "cges";
    std::size_t k = 4;
    bool limit = true;
    double ess = EssConfig{}.eta;
};

struct Learned {
    Pdag cpdag;
    double seconds = 0.0;
    std::vector<RoundRecord> rounds;
};

void validate(const LearnSettings& s, std::size_t n) {
    if (s.algorithm != "ges" && s.algorithm != "cges") throw UsageError("algorithm must be ges or cges");
    if (!(s.ess > 0.0)) throw UsageError("--ess must be positive");
    if (s.algorithm == "cges" && (s.k < 1 || s.k > n))
        throw UsageError("--k must lie in [1, " + std::to_string(n) + "]");
    if (n < 2) throw UsageError("learning needs at least two variables");
}

Learned learn(const Dataset& data, const LearnSettings& s, std::uint64_t seed) {
    validate(s, data.num_variables());
    ScoreCache cache;
    const auto start = std::chrono::steady_clock::now();
    Learned out;
    if (s.algorithm == "ges") {
        const BdeuScore score(data, EssConfig{s.ess}, cache);
        out.cpdag = ges(Pdag(data.num_variables()), score, SearchConfig{}).cpdag;
    } else {
        RingConfig cfg;
        cfg.k = s.k;
        cfg.limit_enabled = s.limit;
        cfg.ess = EssConfig{s.ess};
        cfg.seed = seed;
        CgesResult result = run_cges(data, cfg, cache);
        out.cpdag = std::move(result.cpdag);
        out.rounds = std::move(result.trace);
    }
    out.seconds = elapsed_since(start);
    return out;
}

RunMeta meta_for(const std::string& network, const LearnSettings& s, std::uint64_t seed, double seconds) {
    RunMeta meta;
    meta.network = network;
    meta.algorithm = s.algorithm;
    meta.k = s.algorithm == "ges" ? 1 : s.k;
    meta.limit_enabled = s.algorithm == "cges" && s.limit;
    meta.seed = seed;
    meta.seconds = seconds;
    return meta;
}

void append_results(const std::string& path, const std::vector<EvalReport>& rows) {
    const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
    std::ofstream file(path, std::ios::app);
    if (!file) throw DataError("cannot write '" + path + "'");
    if (fresh) file << kResultsHeader << '\n';
    for (const EvalReport& r : rows) file << format_report(r) << '\n';
}

Dataset load_dataset(const std::string& path, const BayesianNetwork* network) {
    if (network) return read_csv_file(path, network->variables);
    return read_csv_file(path);
}

std::string network_label(const std::string& path) { return fs::path(path).stem().string(); }

// ---------------------------------------------------------------------------- bench

struct BenchConfig {
    LearnSettings settings;
    auto key() const { return std::tuple(settings.algorithm, settings.k, settings.limit); }
};

struct BenchDataset {
    Dataset data;
    std::uint64_t seed = 0;
    std::string label;
};

const std::vector<std::string>& require(const Manifest& m, std::string_view key) {
    const auto* values = m.find(key);
    if (!values || values->empty()) throw UsageError("manifest is missing '" + std::string(key) + "'");
    return *values;
}

std::uint64_t to_unsigned(const std::string& text, std::string_view key) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::logic_error&) {
        throw UsageError("manifest key '" + std::string(key) + "' expects an integer, got '" + text + "'");
    }
}

int run_bench(const std::string& manifest_path, const std::string& out_path, std::ostream& out, std::ostream& err) {
    const Manifest m = parse_manifest(read_text_file(manifest_path));
    const fs::path base = fs::path(manifest_path).parent_path();
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (base / p).string(); };

    const std::string network_path = resolve(require(m, "network").front());
    const BayesianNetwork network = read_bif_file(network_path);
    const std::string label = m.find("name") ? require(m, "name").front() : network_label(network_path);
    const double ess = m.find("ess") ? std::stod(require(m, "ess").front()) : EssConfig{}.eta;

    std::vector<BenchDataset> datasets;
    if (const auto* files = m.find("datasets")) {
        for (std::size_t i = 0; i < files->size(); ++i)
            datasets.push_back({load_dataset(resolve((*files)[i]), &network), i, (*files)[i]});
    } else {
        const std::uint64_t samples = to_unsigned(require(m, "samples").front(), "samples");
        const std::uint64_t rows = m.find("rows") ? to_unsigned(require(m, "rows").front(), "rows") : 5000;
        const std::uint64_t seed = m.find("seed") ? to_unsigned(require(m, "seed").front(), "seed") : 0;
        for (std::uint64_t i = 0; i < samples; ++i)
            datasets.push_back({forward_sample(network, rows, seed + i), seed + i, "sample " + std::to_string(seed + i)});
    }

    std::vector<BenchConfig> configs;
    for (const std::string& algorithm : require(m, "algorithms")) {
        if (algorithm == "ges") {
            configs.push_back({{"ges", 1, false, ess}});
            continue;
        }
        if (algorithm != "cges") throw UsageError("unknown algorithm '" + algorithm + "' in manifest");
        const std::vector<std::string> ks = m.find("k") ? require(m, "k") : std::vector<std::string>{"4"};
        const std::vector<std::string> limits = m.find("limit") ? require(m, "limit") : std::vector<std::string>{"on"};
        for (const std::string& k : ks)
            for (const std::string& limit : limits) {
                if (limit != "on" && limit != "off") throw UsageError("limit values must be on or off");
                configs.push_back({{"cges", static_cast<std::size_t>(to_unsigned(k, "k")), limit == "on", ess}});
            }
    }
    std::sort(configs.begin(), configs.end(), [](const BenchConfig& a, const BenchConfig& b) { return a.key() < b.key(); });
    configs.erase(std::unique(configs.begin(), configs.end(), [](const BenchConfig& a, const BenchConfig& b) { return a.key() == b.key(); }),
                  configs.end());

    std::vector<EvalReport> reports;
    bool any_failed = false;
    for (const BenchConfig& config : configs) {
        std::vector<EvalReport> runs;
        for (const BenchDataset& d : datasets) {
            try {
                validate(config.settings, d.data.num_variables());
                const Learned learned = learn(d.data, config.settings, d.seed);
                runs.push_back(evaluate(learned.cpdag, network, d.data, meta_for(label, config.settings, d.seed, learned.seconds),
                                        EssConfig{ess}));
            } catch (const UsageError&) {
                throw;
            } catch (const std::exception& e) {
                any_failed = true;
                err << "run failed (" << config.settings.algorithm << ", k=" << config.settings.k << ", " << d.label
                    << "): " << e.what() << '\n';
                EvalReport failed;
                const RunMeta meta = meta_for(label, config.settings, d.seed, 0.0);
                failed.network = meta.network;
                failed.algorithm = meta.algorithm;
                failed.k = meta.k;
                failed.limit_enabled = meta.limit_enabled;
                failed.seed = meta.seed;
                runs.push_back(failed);
            }
        }
        EvalReport mean;
        const RunMeta meta = meta_for(label, config.settings, 0, 0.0);
        mean.network = meta.network;
        mean.algorithm = meta.algorithm;
        mean.k = meta.k;
        mean.limit_enabled = meta.limit_enabled;
        double bdeu = 0.0, distance = 0.0, seconds = 0.0;
        std::size_t succeeded = 0;
        for (const EvalReport& r : runs) {
            if (!r.bdeu_normalized) continue;
            bdeu += *r.bdeu_normalized;
            distance += *r.smhd;
            seconds += r.seconds;
            ++succeeded;
        }
        if (succeeded > 0) {
            mean.bdeu_normalized = bdeu / static_cast<double>(succeeded);
            mean.smhd = distance / static_cast<double>(succeeded);
            mean.seconds = seconds / static_cast<double>(succeeded);
        }
        reports.insert(reports.end(), runs.begin(), runs.end());
        reports.push_back(mean);
    }
    sort_reports(reports);
    const std::string csv = write_results_csv(reports);
    if (out_path.empty())
        out << csv;
    else
        write_text_file(out_path, csv);
    if (any_failed) err << "some runs failed; their rows have empty metrics\n";
    return ok;
}

}  // namespace

// ---------------------------------------------------------------------------- edge lists

std::string write_edge_list(const Pdag& g, const std::vector<Variable>& variables) {
    if (g.size() != variables.size()) throw DimensionMismatch("edge list: graph and variables differ in size");
    std::ostringstream out;
    out << "nodes " << g.size() << " directed " << g.num_arcs() << " undirected " << g.num_edges() << '\n';
    for (const Arc& a : g.arcs()) out << variables[a.from].name << " -> " << variables[a.to].name << '\n';
    for (const VariablePair& e : g.edges()) out << variables[e.first].name << " -- " << variables[e.second].name << '\n';
    return out.str();
}

Pdag read_edge_list(std::string_view text, const std::vector<Variable>& variables) {
    std::map<std::string, VariableId, std::less<>> index;
    for (std::size_t i = 0; i < variables.size(); ++i) index.emplace(variables[i].name, static_cast<VariableId>(i));
    auto lookup = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) throw VariableMismatch("edge list names unknown variable '" + name + "'");
        return it->second;
    };

    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty edge list", 1, 1);
    const auto header = split_words(lines.front());
    if (header.size() != 6 || header[0] != "nodes" || header[2] != "directed" || header[4] != "undirected")
        throw ParseError("expected 'nodes N directed D undirected U'", 1, 1);
    if (header[1] != std::to_string(variables.size()))
        throw VariableMismatch("edge list has " + header[1] + " nodes, expected " + std::to_string(variables.size()));

    Pdag g(variables.size());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto words = split_words(lines[i]);
        if (words.empty()) continue;
        if (words.size() != 3 || (words[1] != "->" && words[1] != "--"))
            throw ParseError("expected 'u -> v' or 'u -- v'", i + 1, 1);
        const VariableId u = lookup(words[0]), v = lookup(words[2]);
        if (u == v || g.adjacent(u, v)) throw ParseError("self loop or repeated pair", i + 1, 1);
        if (words[1] == "->")
            g.add_arc(u, v);
        else
            g.add_edge(u, v);
    }
    if (std::to_string(g.num_arcs()) != header[3] || std::to_string(g.num_edges()) != header[5])
        throw ParseError("edge counts do not match the header", 1, 1);
    return g;
}

// ---------------------------------------------------------------------------- manifest

const std::vector<std::string>* Manifest::find(std::string_view key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return &v;
    return nullptr;
}

Manifest parse_manifest(std::string_view text) {
    Manifest m;
    std::size_t line_no = 0;
    for (std::string_view line : split_lines(text)) {
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (split_words(line).empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no, 1);
        const auto key = split_words(line.substr(0, eq));
        if (key.size() != 1) throw ParseError("manifest keys are single words", line_no, 1);
        if (m.find(key.front())) throw ParseError("duplicate key '" + key.front() + "'", line_no, 1);
        m.entries.emplace_back(key.front(), split_words(line.substr(eq + 1)));
    }
    return m;
}

// ---------------------------------------------------------------------------- entry point

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Structure learning with GES and ring-distributed cGES"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    std::size_t threads = 0;
    app.add_option("--threads", threads, "Worker parallelism hint (0 = all cores)");

    // sample
    auto* sample = app.add_subcommand("sample", "Draw CSV datasets from a BIF network");
    std::string network_path, out_path;
    std::size_t rows = 5000, count = 1;
    std::uint64_t seed = 0;
    sample->add_option("--network", network_path, "BIF file")->required()->check(CLI::ExistingFile);
    sample->add_option("--rows", rows, "Rows per dataset");
    sample->add_option("--count", count, "Number of datasets");
    sample->add_option("--seed", seed, "Seed of the first dataset; dataset i uses seed + i");
    sample->add_option("--out", out_path, "Output directory")->required();

    // learn
    auto* learn_cmd = app.add_subcommand("learn", "Learn a structure from a CSV dataset");
    std::string data_path, results_path, trace_path;
    LearnSettings settings;
    learn_cmd->add_option("--data", data_path, "CSV dataset")->required()->check(CLI::ExistingFile);
    learn_cmd->add_option("--network", network_path, "Reference BIF: fixes state sets and enables SMHD")->check(CLI::ExistingFile);
    learn_cmd->add_option("--algorithm", settings.algorithm, "ges or cges")->check(CLI::IsMember({"ges", "cges"}));
    learn_cmd->add_option("--k", settings.k, "Number of ring workers");
    learn_cmd->add_flag("--limit,!--no-limit", settings.limit, "Per-round insertion limit");
    learn_cmd->add_option("--ess", settings.ess, "BDeu equivalent sample size");
    learn_cmd->add_option("--seed", seed, "Recorded in the results row");
    learn_cmd->add_option("--out", out_path, "Edge-list output file")->required();
    learn_cmd->add_option("--results", results_path, "Results CSV to append to");
    learn_cmd->add_option("--trace", trace_path, "Per-round trace output (cges only)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Score an edge list against a reference network");
    std::string graph_path;
    eval_cmd->add_option("--network", network_path, "Reference BIF")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--data", data_path, "CSV dataset")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--graph", graph_path, "Edge list")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--ess", settings.ess, "BDeu equivalent sample size");

    // bench
    auto* bench = app.add_subcommand("bench", "Run a grid of configurations from a manifest");
    std::string manifest_path;
    bench->add_option("--manifest", manifest_path, "key = value manifest")->required()->check(CLI::ExistingFile);
    bench->add_option("--out", out_path, "Results CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        const auto limit = thread_limit(threads);
        if (*sample) {
            const BayesianNetwork bn = read_bif_file(network_path);
            fs::create_directories(out_path);
            const std::string stem = network_label(network_path);
            for (std::size_t i = 0; i < count; ++i) {
                const fs::path file = fs::path(out_path) / (stem + "_" + std::to_string(seed + i) + ".csv");
                write_text_file(file.string(), write_csv(forward_sample(bn, rows, seed + i)));
                out << file.string() << '\n';
            }
            return ok;
        }
        if (*learn_cmd) {
            std::optional<BayesianNetwork> reference;
            if (!network_path.empty()) reference = read_bif_file(network_path);
            const Dataset data = load_dataset(data_path, reference ? &*reference : nullptr);
            validate(settings, data.num_variables());
            const Learned learned = learn(data, settings, seed);
            write_text_file(out_path, write_edge_list(learned.cpdag, data.variables()));
            if (!trace_path.empty()) {
                std::ostringstream trace;
                write_round_trace(trace, learned.rounds);
                write_text_file(trace_path, trace.str());
            }
            const std::string label = reference ? network_label(network_path) : network_label(data_path);
            const RunMeta meta = meta_for(label, settings, seed, learned.seconds);
            EvalReport row;
            if (reference) {
                row = evaluate(learned.cpdag, *reference, data, meta, EssConfig{settings.ess});
            } else {
                ScoreCache cache;
                row = {meta.network, meta.algorithm, meta.k, meta.limit_enabled, meta.seed,
                       normalized_bdeu(consistent_extension(learned.cpdag), data, EssConfig{settings.ess}, cache),
                       std::nullopt, meta.seconds};
            }
            out << kResultsHeader << '\n' << format_report(row) << '\n';
            if (!results_path.empty()) append_results(results_path, {row});
            return ok;
        }
        if (*eval_cmd) {
            const BayesianNetwork reference = read_bif_file(network_path);
            const Dataset data = read_csv_file(data_path, reference.variables);
            const Pdag g = read_edge_list(read_text_file(graph_path), data.variables());
            RunMeta meta;
            meta.network = network_label(network_path);
            meta.algorithm = "given";
            out << kResultsHeader << '\n' << format_report(evaluate(g, reference, data, meta, EssConfig{settings.ess})) << '\n';
            return ok;
        }
        return run_bench(manifest_path, out_path, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    } catch (const VariableMismatch& e) {
        err << "error: " << e.what() << '\n';
        return data_error;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return internal;
    }
}

}  // namespace cges::cli
