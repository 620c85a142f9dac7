#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "cges/data.hpp"
#include "cges/evaluation.hpp"
#include "cli.hpp"
#include "support.hpp"

using namespace cges;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "cges");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("cges_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

/// Drops the trailing seconds column so reruns can be compared.
std::string without_seconds(const std::string& csv) {
    std::string out;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) out += line.substr(0, line.rfind(',')) + '\n';
    return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("edge list round trip") {
    const std::vector<Variable> vars = {test::binary("a"), test::binary("b"), test::binary("c")};
    Pdag g(3);
    g.add_arc(0, 2);
    g.add_edge(0, 1);
    const std::string text = cli::write_edge_list(g, vars);
    CHECK(text == "nodes 3 directed 1 undirected 1\na -> c\na -- b\n");
    CHECK(cli::read_edge_list(text, vars) == g);
    CHECK_THROWS(cli::read_edge_list("nodes 3 directed 1 undirected 0\na -> z\n", vars));
    CHECK_THROWS(cli::read_edge_list("nodes 3 directed 2 undirected 0\na -> b\n", vars));
}

TEST_CASE("manifest parsing") {
    const auto m = cli::parse_manifest("# grid\nnetwork = net.bif\nk = 2 4  # two sizes\n\nlimit=on off\n");
    REQUIRE(m.find("k"));
    CHECK(*m.find("k") == std::vector<std::string>{"2", "4"});
    CHECK(*m.find("limit") == std::vector<std::string>{"on", "off"});
    CHECK(m.find("datasets") == nullptr);
    CHECK_THROWS(cli::parse_manifest("k 2\n"));
    CHECK_THROWS(cli::parse_manifest("k = 1\nk = 2\n"));
}

TEST_CASE("sample writes deterministic files") {
    const fs::path dir = scratch("sample");
    const std::string asia = test::data_path("networks/asia.bif");
    const Run none = invoke({"sample", "--network", asia, "--count", "0", "--out", (dir / "none").string()});
    CHECK(none.code == 0);
    CHECK(none.out.empty());
    CHECK(fs::is_empty(dir / "none"));

    const Run two = invoke({"sample", "--network", asia, "--rows", "300", "--count", "2", "--seed", "5", "--out", (dir / "a").string()});
    CHECK(two.code == 0);
    CHECK(fs::exists(dir / "a" / "asia_5.csv"));
    CHECK(fs::exists(dir / "a" / "asia_6.csv"));
    invoke({"sample", "--network", asia, "--rows", "300", "--count", "2", "--seed", "5", "--out", (dir / "b").string()});
    CHECK(read_text_file((dir / "a" / "asia_6.csv").string()) == read_text_file((dir / "b" / "asia_6.csv").string()));
    const Dataset d = read_csv_file((dir / "a" / "asia_5.csv").string(), read_bif_file(asia).variables);
    CHECK(d.num_rows() == 300);
    CHECK(d.num_variables() == 8);
}

TEST_CASE("learn on collider data") {
    const fs::path dir = scratch("learn");
    const auto bn = test::collider_network();
    write_text_file((dir / "net.bif").string(), write_bif(bn));
    write_text_file((dir / "data.csv").string(), write_csv(forward_sample(bn, 10000, 3)));

    const Run ges_run = invoke({"learn", "--data", (dir / "data.csv").string(), "--network", (dir / "net.bif").string(),
                                "--algorithm", "ges", "--out", (dir / "ges.txt").string(), "--results", (dir / "results.csv").string()});
    REQUIRE(ges_run.code == 0);
    CHECK(read_text_file((dir / "ges.txt").string()) == "nodes 3 directed 2 undirected 0\nX0 -> X2\nX1 -> X2\n");

    const Run cges_run = invoke({"learn", "--data", (dir / "data.csv").string(), "--network", (dir / "net.bif").string(),
                                 "--algorithm", "cges", "--k", "1", "--no-limit", "--out", (dir / "cges.txt").string(),
                                 "--results", (dir / "results.csv").string(), "--trace", (dir / "trace.txt").string()});
    REQUIRE(cges_run.code == 0);
    CHECK(read_text_file((dir / "cges.txt").string()) == read_text_file((dir / "ges.txt").string()));
    CHECK_FALSE(read_text_file((dir / "trace.txt").string()).empty());

    const auto rows = read_results_csv(read_text_file((dir / "results.csv").string()));
    REQUIRE(rows.size() == 2);
    CHECK(*rows[0].smhd == 0.0);
    CHECK(rows[1].algorithm == "cges");
    CHECK(*rows[1].bdeu_normalized == *rows[0].bdeu_normalized);

    const Run eval = invoke({"eval", "--network", (dir / "net.bif").string(), "--data", (dir / "data.csv").string(), "--graph",
                             (dir / "ges.txt").string()});
    REQUIRE(eval.code == 0);
    const std::string row = eval.out.substr(eval.out.find('\n') + 1);
    CHECK(parse_report(row.substr(0, row.find('\n'))).bdeu_normalized == rows[0].bdeu_normalized);
}

TEST_CASE("exit codes") {
    const fs::path dir = scratch("codes");
    const Run missing = invoke({"learn", "--data", (dir / "absent.csv").string(), "--out", (dir / "g.txt").string()});
    CHECK(missing.code == 1);
    CHECK_FALSE(fs::exists(dir / "g.txt"));
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"learn", "--bogus"}).code == 1);
    CHECK(invoke({"--help"}).code == 0);

    write_text_file((dir / "ragged.csv").string(), "a,b\nx,y\nz\n");
    const Run ragged = invoke({"learn", "--data", (dir / "ragged.csv").string(), "--out", (dir / "g.txt").string()});
    CHECK(ragged.code == 2);
    CHECK_FALSE(fs::exists(dir / "g.txt"));

    write_text_file((dir / "ok.csv").string(), write_csv(forward_sample(test::collider_network(), 100, 1)));
    const Run bad_k = invoke({"learn", "--data", (dir / "ok.csv").string(), "--k", "9", "--out", (dir / "g.txt").string()});
    CHECK(bad_k.code == 1);
    write_text_file((dir / "broken.bif").string(), "network x {\nvariable");
    CHECK(invoke({"sample", "--network", (dir / "broken.bif").string(), "--out", (dir / "s").string()}).code == 2);
}

TEST_CASE("bench grid") {
    const fs::path dir = scratch("bench");
    const std::string asia = test::data_path("networks/asia.bif");
    invoke({"sample", "--network", asia, "--rows", "1000", "--count", "3", "--seed", "1", "--out", dir.string()});
    write_text_file((dir / "grid.txt").string(),
                    "network = " + asia + "\ndatasets = asia_1.csv asia_2.csv asia_3.csv\nalgorithms = ges cges\nk = 2\nlimit = on\n");
    const Run first = invoke({"bench", "--manifest", (dir / "grid.txt").string()});
    REQUIRE(first.code == 0);
    const auto rows = read_results_csv(first.out);
    CHECK(rows.size() == 8);
    std::size_t means = 0;
    for (const auto& r : rows) means += !r.seed.has_value();
    CHECK(means == 2);
    CHECK(rows[0].algorithm == "cges");
    CHECK_FALSE(rows[3].seed.has_value());

    const Run second = invoke({"bench", "--manifest", (dir / "grid.txt").string(), "--out", (dir / "out.csv").string()});
    REQUIRE(second.code == 0);
    CHECK(without_seconds(read_text_file((dir / "out.csv").string())) == without_seconds(first.out));

    write_text_file((dir / "sampled.txt").string(), "network = " + asia + "\nsamples = 2\nrows = 500\nseed = 4\nalgorithms = ges\n");
    const Run sampled = invoke({"bench", "--manifest", (dir / "sampled.txt").string()});
    REQUIRE(sampled.code == 0);
    CHECK(read_results_csv(sampled.out).size() == 3);

    write_text_file((dir / "bad.txt").string(), "network = " + asia + "\nsamples = 1\nalgorithms = fges\n");
    CHECK(invoke({"bench", "--manifest", (dir / "bad.txt").string()}).code == 1);
}

}  // TEST_SUITE
