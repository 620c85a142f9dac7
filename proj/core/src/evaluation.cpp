#include "cges/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <tuple>

#include "cges/errors.hpp"

namespace cges {

namespace {

std::string shortest(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

template <typename T>
T parse_number(std::string_view field, std::size_t line, std::size_t column) {
    T value{};
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || end != field.data() + field.size())
        throw ParseError("bad number '" + std::string(field) + "'", line, column);
    return value;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) return out;
        start = comma + 1;
    }
}

EvalReport parse_row(std::string_view line, std::size_t line_no) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto f = split(line);
    if (f.size() != 8) throw ParseError("expected 8 fields, found " + std::to_string(f.size()), line_no, 1);
    EvalReport r;
    r.network = std::string(f[0]);
    r.algorithm = std::string(f[1]);
    r.k = parse_number<std::size_t>(f[2], line_no, 3);
    if (f[3] != "0" && f[3] != "1") throw ParseError("limit must be 0 or 1", line_no, 4);
    r.limit_enabled = f[3] == "1";
    if (f[4] != "mean") r.seed = parse_number<std::uint64_t>(f[4], line_no, 5);
    if (!f[5].empty()) r.bdeu_normalized = parse_number<double>(f[5], line_no, 6);
    if (!f[6].empty()) r.smhd = parse_number<double>(f[6], line_no, 7);
    r.seconds = parse_number<double>(f[7], line_no, 8);
    return r;
}

}  // namespace

std::size_t smhd(const Dag& g1, const Dag& g2) {
    if (g1.size() != g2.size()) throw DimensionMismatch("smhd: graphs have different variable counts");
    const UndirectedGraph m1 = moralize(g1);
    const UndirectedGraph m2 = moralize(g2);
    std::size_t distance = 0;
    for (const VariablePair& e : m1.edges())
        if (!m2.has_edge(e.first, e.second)) ++distance;
    for (const VariablePair& e : m2.edges())
        if (!m1.has_edge(e.first, e.second)) ++distance;
    return distance;
}

Dag align_by_name(const Dag& g, const std::vector<Variable>& from, const std::vector<Variable>& to) {
    if (g.size() != from.size()) throw DimensionMismatch("align_by_name: graph and variable list differ in size");
    if (from.size() != to.size())
        throw VariableMismatch("variable counts differ: " + std::to_string(from.size()) + " vs " + std::to_string(to.size()));
    std::vector<VariableId> target(from.size(), -1);
    std::vector<char> used(to.size(), 0);
    for (std::size_t i = 0; i < from.size(); ++i) {
        auto it = std::find_if(to.begin(), to.end(), [&](const Variable& v) { return v.name == from[i].name; });
        if (it == to.end()) throw VariableMismatch("variable '" + from[i].name + "' is missing from the reference");
        const auto j = static_cast<std::size_t>(it - to.begin());
        if (used[j]) throw VariableMismatch("variable '" + from[i].name + "' appears twice");
        used[j] = 1;
        target[i] = static_cast<VariableId>(j);
    }
    Dag out(to.size());
    for (const Arc& a : g.arcs()) out.add_arc(target[a.from], target[a.to]);
    return out;
}

EvalReport evaluate(const Pdag& learned, const BayesianNetwork& reference, const Dataset& data, const RunMeta& meta,
                    EssConfig ess) {
    if (learned.size() != data.num_variables()) throw DimensionMismatch("learned graph and dataset differ in size");
    const Dag extension = consistent_extension(learned);
    const Dag aligned = align_by_name(extension, data.variables(), reference.variables);
    ScoreCache cache;
    EvalReport r;
    r.network = meta.network;
    r.algorithm = meta.algorithm;
    r.k = meta.k;
    r.limit_enabled = meta.limit_enabled;
    r.seed = meta.seed;
    r.bdeu_normalized = normalized_bdeu(extension, data, ess, cache);
    r.smhd = static_cast<double>(smhd(aligned, reference.dag));
    r.seconds = meta.seconds;
    return r;
}

void sort_reports(std::vector<EvalReport>& reports) {
    auto key = [](const EvalReport& r) {
        return std::tuple(r.network, r.algorithm, r.k, r.limit_enabled, !r.seed.has_value(), r.seed.value_or(0));
    };
    std::stable_sort(reports.begin(), reports.end(), [&](const EvalReport& a, const EvalReport& b) { return key(a) < key(b); });
}

std::string format_report(const EvalReport& r) {
    std::ostringstream out;
    out << r.network << ',' << r.algorithm << ',' << r.k << ',' << (r.limit_enabled ? 1 : 0) << ','
        << (r.seed ? std::to_string(*r.seed) : std::string("mean")) << ','
        << (r.bdeu_normalized ? shortest(*r.bdeu_normalized) : std::string()) << ','
        << (r.smhd ? shortest(*r.smhd) : std::string()) << ',' << shortest(r.seconds);
    return out.str();
}

EvalReport parse_report(std::string_view line) { return parse_row(line, 1); }

std::string write_results_csv(const std::vector<EvalReport>& reports) {
    std::string out(kResultsHeader);
    out += '\n';
    for (const EvalReport& r : reports) out += format_report(r) + '\n';
    return out;
}

std::vector<EvalReport> read_results_csv(std::string_view text) {
    std::vector<EvalReport> out;
    std::size_t line_no = 0;
    bool header = true;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (header) {
            if (line != kResultsHeader) throw ParseError("unexpected results header", line_no, 1);
            header = false;
            continue;
        }
        if (line.empty()) continue;
        out.push_back(parse_row(line, line_no));
    }
    if (header) throw ParseError("missing results header", 1, 1);
    return out;
}

}  // namespace cges
