#include "cges/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "cges/errors.hpp"
#include "random.hpp"

namespace cges {

// ---------------------------------------------------------------------------- Dataset

Dataset::Dataset(std::vector<Variable> variables, std::vector<std::vector<StateIndex>> columns)
    : variables_(std::move(variables)), columns_(std::move(columns)) {
    if (columns_.size() != variables_.size()) throw ValidationError("dataset: column count differs from variable count");
    rows_ = columns_.empty() ? 0 : columns_.front().size();
    for (std::size_t v = 0; v < columns_.size(); ++v) {
        if (columns_[v].size() != rows_) throw ValidationError("dataset: column '" + variables_[v].name + "' has wrong length");
        const auto card = variables_[v].cardinality();
        for (StateIndex s : columns_[v])
            if (s >= card) throw ValidationError("dataset: state out of range in column '" + variables_[v].name + "'");
    }
}

std::optional<VariableId> Dataset::find(std::string_view name) const {
    for (std::size_t v = 0; v < variables_.size(); ++v)
        if (variables_[v].name == name) return static_cast<VariableId>(v);
    return std::nullopt;
}

// ---------------------------------------------------------------------------- BayesianNetwork

std::optional<VariableId> BayesianNetwork::find(std::string_view wanted) const {
    for (std::size_t v = 0; v < variables.size(); ++v)
        if (variables[v].name == wanted) return static_cast<VariableId>(v);
    return std::nullopt;
}

std::size_t BayesianNetwork::config_index(VariableId v, std::span<const StateIndex> parent_states) const {
    std::size_t index = 0;
    const auto& parents = cpts[v].parents;
    for (std::size_t i = 0; i < parents.size(); ++i)
        index = index * variables[parents[i]].cardinality() + parent_states[i];
    return index;
}

void BayesianNetwork::validate(double tolerance) const {
    if (dag.size() != variables.size() || cpts.size() != variables.size())
        throw ValidationError("network: graph, variables and CPTs disagree in size");
    for (std::size_t v = 0; v < variables.size(); ++v) {
        const Variable& var = variables[v];
        if (var.cardinality() < 2) throw ValidationError("variable '" + var.name + "' has fewer than two states");
        std::set<std::string> distinct(var.states.begin(), var.states.end());
        if (distinct.size() != var.states.size()) throw ValidationError("variable '" + var.name + "' repeats a state name");
        const Cpt& cpt = cpts[v];
        std::vector<VariableId> sorted_parents = cpt.parents;
        std::sort(sorted_parents.begin(), sorted_parents.end());
        auto graph_parents = dag.parents(static_cast<VariableId>(v));
        if (!std::equal(sorted_parents.begin(), sorted_parents.end(), graph_parents.begin(), graph_parents.end()))
            throw ValidationError("CPT parents of '" + var.name + "' differ from the graph");
        std::size_t q = 1;
        for (VariableId p : cpt.parents) q *= variables[p].cardinality();
        if (cpt.num_states != var.cardinality() || cpt.probabilities.size() != q * var.cardinality())
            throw ValidationError("CPT of '" + var.name + "' has the wrong shape");
        for (std::size_t j = 0; j < q; ++j) {
            double sum = 0.0;
            for (double p : cpt.row(j)) {
                if (!(p >= 0.0)) throw ValidationError("CPT of '" + var.name + "' has a negative entry");
                sum += p;
            }
            if (std::abs(sum - 1.0) > tolerance) throw ValidationError("CPT row of '" + var.name + "' does not sum to one");
        }
    }
    topological_order(dag);
}

// ---------------------------------------------------------------------------- BIF

namespace {

struct Token {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
    bool punct = false;
};

class BifLexer {
public:
    explicit BifLexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space_and_comments();
            if (pos_ >= text_.size()) break;
            Token tok;
            tok.line = line_;
            tok.column = column_;
            char c = text_[pos_];
            if (is_punct(c)) {
                tok.text = std::string(1, c);
                tok.punct = true;
                advance();
            } else if (c == '"') {
                advance();
                while (pos_ < text_.size() && text_[pos_] != '"') {
                    tok.text.push_back(text_[pos_]);
                    advance();
                }
                if (pos_ >= text_.size()) throw ParseError("unterminated string", tok.line, tok.column);
                advance();
            } else {
                while (pos_ < text_.size() && !is_space(text_[pos_]) && !is_punct(text_[pos_]) && !starts_comment()) {
                    tok.text.push_back(text_[pos_]);
                    advance();
                }
            }
            out.push_back(std::move(tok));
        }
        return out;
    }

private:
    static bool is_punct(char c) { return std::string_view("{}[]()|,;").find(c) != std::string_view::npos; }
    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

    bool starts_comment() const {
        return pos_ + 1 < text_.size() && text_[pos_] == '/' && (text_[pos_ + 1] == '/' || text_[pos_ + 1] == '*');
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space_and_comments() {
        while (pos_ < text_.size()) {
            if (is_space(text_[pos_])) {
                advance();
            } else if (starts_comment() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (starts_comment()) {
                const std::size_t l = line_, c = column_;
                advance();
                advance();
                while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) advance();
                if (pos_ + 1 >= text_.size()) throw ParseError("unterminated comment", l, c);
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

struct PendingCpt {
    VariableId child;
    std::vector<VariableId> parents;
    std::vector<double> values;
    std::vector<char> row_set;
    Token at;
};

class BifParser {
public:
    BifParser(std::vector<Token> tokens, Diagnostics* diagnostics)
        : tokens_(std::move(tokens)), diagnostics_(diagnostics) {}

    BayesianNetwork run() {
        while (!done()) {
            const Token& head = peek();
            if (head.text == "network") {
                next();
                bn_.name = word("network name");
                skip_block();
            } else if (head.text == "variable") {
                parse_variable();
            } else if (head.text == "probability") {
                parse_probability();
            } else {
                fail("expected 'network', 'variable' or 'probability'", head);
            }
        }
        return finish();
    }

private:
    [[noreturn]] static void fail(const std::string& msg, const Token& at) { throw ParseError(msg, at.line, at.column); }

    bool done() const { return pos_ >= tokens_.size(); }
    const Token& peek() const {
        if (done()) {
            static const Token eof{"<eof>", 0, 0, false};
            if (tokens_.empty()) fail("unexpected end of input", eof);
            Token last = tokens_.back();
            fail("unexpected end of input", last);
        }
        return tokens_[pos_];
    }
    const Token& next() {
        const Token& t = peek();
        ++pos_;
        return t;
    }
    bool at_punct(char c) const { return !done() && tokens_[pos_].punct && tokens_[pos_].text[0] == c; }
    void expect(char c) {
        const Token& t = next();
        if (!t.punct || t.text[0] != c) fail(std::string("expected '") + c + "' but found '" + t.text + "'", t);
    }
    std::string word(const char* what) {
        const Token& t = next();
        if (t.punct) fail(std::string("expected ") + what + " but found '" + t.text + "'", t);
        return t.text;
    }
    double number() {
        const Token& t = next();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (t.punct || ec != std::errc() || ptr != t.text.data() + t.text.size())
            fail("expected a number but found '" + t.text + "'", t);
        return value;
    }

    // Skips a balanced {...} block.
    void skip_block() {
        expect('{');
        int depth = 1;
        while (depth > 0) {
            const Token& t = next();
            if (t.punct && t.text[0] == '{') ++depth;
            if (t.punct && t.text[0] == '}') --depth;
        }
    }

    void skip_statement() {
        while (!at_punct(';')) next();
        expect(';');
    }

    void parse_variable() {
        const Token& kw = next();
        Variable var;
        var.name = word("variable name");
        if (index_.contains(var.name)) fail("variable '" + var.name + "' declared twice", kw);
        expect('{');
        bool typed = false;
        while (!at_punct('}')) {
            const Token& t = peek();
            if (t.text == "type") {
                next();
                if (word("variable type") != "discrete") fail("only discrete variables are supported", t);
                expect('[');
                const Token& count_tok = peek();
                const double count = number();
                expect(']');
                expect('{');
                while (!at_punct('}')) {
                    var.states.push_back(word("state name"));
                    if (at_punct(',')) next();
                }
                expect('}');
                expect(';');
                if (static_cast<double>(var.states.size()) != count)
                    fail("declared state count does not match the state list", count_tok);
                typed = true;
            } else {
                skip_statement();
            }
        }
        expect('}');
        if (!typed) fail("variable '" + var.name + "' has no type", kw);
        if (var.states.size() < 2) fail("variable '" + var.name + "' needs at least two states", kw);
        if (var.states.size() > std::numeric_limits<StateIndex>::max()) fail("too many states", kw);
        std::set<std::string> distinct(var.states.begin(), var.states.end());
        if (distinct.size() != var.states.size()) fail("variable '" + var.name + "' repeats a state name", kw);
        index_.emplace(var.name, static_cast<VariableId>(bn_.variables.size()));
        bn_.variables.push_back(std::move(var));
    }

    VariableId lookup(const Token& t) const {
        auto it = index_.find(t.text);
        if (it == index_.end()) throw ValidationError("undefined variable '" + t.text + "' at " + std::to_string(t.line) + ":" + std::to_string(t.column));
        return it->second;
    }

    StateIndex state_of(VariableId v, const Token& t) const {
        const auto& states = bn_.variables[v].states;
        auto it = std::find(states.begin(), states.end(), t.text);
        if (it == states.end())
            throw ValidationError("unknown state '" + t.text + "' of '" + bn_.variables[v].name + "' at " + std::to_string(t.line) + ":" + std::to_string(t.column));
        return static_cast<StateIndex>(it - states.begin());
    }

    std::vector<double> numbers_until_semicolon() {
        std::vector<double> out;
        while (!at_punct(';')) {
            out.push_back(number());
            if (at_punct(',')) next();
        }
        expect(';');
        return out;
    }

    void parse_probability() {
        PendingCpt cpt;
        cpt.at = next();
        expect('(');
        cpt.child = lookup(next());
        if (at_punct('|')) {
            next();
            while (!at_punct(')')) {
                VariableId p = lookup(peek());
                next();
                if (p == cpt.child || std::find(cpt.parents.begin(), cpt.parents.end(), p) != cpt.parents.end())
                    fail("repeated variable in probability header", tokens_[pos_ - 1]);
                cpt.parents.push_back(p);
                if (at_punct(',')) next();
            }
        }
        expect(')');
        for (const auto& seen : pending_)
            if (seen.child == cpt.child) fail("second probability block for '" + bn_.variables[cpt.child].name + "'", cpt.at);

        const std::size_t r = bn_.variables[cpt.child].cardinality();
        std::size_t q = 1;
        for (VariableId p : cpt.parents) q *= bn_.variables[p].cardinality();
        cpt.values.assign(q * r, 0.0);
        cpt.row_set.assign(q, 0);

        expect('{');
        while (!at_punct('}')) {
            const Token& t = peek();
            if (t.punct && t.text[0] == '(') {
                next();
                std::size_t config = 0;
                for (std::size_t i = 0; i < cpt.parents.size(); ++i) {
                    const Token& st = next();
                    config = config * bn_.variables[cpt.parents[i]].cardinality() + state_of(cpt.parents[i], st);
                    if (i + 1 < cpt.parents.size()) expect(',');
                }
                expect(')');
                auto values = numbers_until_semicolon();
                if (values.size() != r) fail("row has " + std::to_string(values.size()) + " entries, expected " + std::to_string(r), t);
                std::copy(values.begin(), values.end(), cpt.values.begin() + static_cast<std::ptrdiff_t>(config * r));
                cpt.row_set[config] = 1;
            } else if (t.text == "table") {
                next();
                auto values = numbers_until_semicolon();
                if (values.size() != q * r) fail("table has " + std::to_string(values.size()) + " entries, expected " + std::to_string(q * r), t);
                // Child state varies slowest, then parents in declaration order.
                for (std::size_t k = 0; k < r; ++k)
                    for (std::size_t j = 0; j < q; ++j) cpt.values[j * r + k] = values[k * q + j];
                std::fill(cpt.row_set.begin(), cpt.row_set.end(), 1);
            } else if (t.text == "default") {
                next();
                auto values = numbers_until_semicolon();
                if (values.size() != r) fail("default row has the wrong length", t);
                for (std::size_t j = 0; j < q; ++j)
                    if (!cpt.row_set[j]) {
                        std::copy(values.begin(), values.end(), cpt.values.begin() + static_cast<std::ptrdiff_t>(j * r));
                        cpt.row_set[j] = 1;
                    }
            } else {
                skip_statement();
            }
        }
        expect('}');
        pending_.push_back(std::move(cpt));
    }

    void warn(std::string msg) {
        if (diagnostics_) diagnostics_->warnings.push_back(std::move(msg));
    }

    BayesianNetwork finish() {
        const std::size_t n = bn_.variables.size();
        bn_.dag = Dag(n);
        bn_.cpts.assign(n, Cpt{});
        std::vector<char> has_cpt(n, 0);
        for (auto& pending : pending_) {
            const auto& var = bn_.variables[pending.child];
            const std::size_t r = var.cardinality();
            for (std::size_t j = 0; j < pending.row_set.size(); ++j) {
                if (!pending.row_set[j]) throw ValidationError("CPT of '" + var.name + "' is missing a parent configuration");
                double sum = 0.0;
                for (std::size_t k = 0; k < r; ++k) {
                    double p = pending.values[j * r + k];
                    if (!(p >= 0.0)) throw ValidationError("CPT of '" + var.name + "' has a negative entry");
                    sum += p;
                }
                const double error = std::abs(sum - 1.0);
                if (error > 1e-6) throw ValidationError("CPT row of '" + var.name + "' sums to " + std::to_string(sum));
                if (error > 1e-9) {
                    for (std::size_t k = 0; k < r; ++k) pending.values[j * r + k] /= sum;
                    warn("renormalized a CPT row of '" + var.name + "'");
                }
            }
            for (VariableId p : pending.parents) bn_.dag.add_arc(p, pending.child);
            bn_.cpts[pending.child] = Cpt{pending.parents, std::move(pending.values), r};
            has_cpt[pending.child] = 1;
        }
        for (std::size_t v = 0; v < n; ++v)
            if (!has_cpt[v]) throw ValidationError("variable '" + bn_.variables[v].name + "' has no probability block");
        if (!bn_.dag.is_acyclic()) throw ValidationError("network structure is cyclic");
        return std::move(bn_);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    Diagnostics* diagnostics_;
    BayesianNetwork bn_;
    std::unordered_map<std::string, VariableId> index_;
    std::vector<PendingCpt> pending_;
};

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

}  // namespace

BayesianNetwork parse_bif(std::string_view text, Diagnostics* diagnostics) {
    return BifParser(BifLexer(text).run(), diagnostics).run();
}

BayesianNetwork read_bif_file(const std::string& path, Diagnostics* diagnostics) {
    return parse_bif(read_text_file(path), diagnostics);
}

std::string write_bif(const BayesianNetwork& bn) {
    std::ostringstream out;
    out << "network " << (bn.name.empty() ? "unknown" : bn.name) << " {\n}\n";
    for (const Variable& var : bn.variables) {
        out << "variable " << var.name << " {\n  type discrete [ " << var.cardinality() << " ] { ";
        for (std::size_t s = 0; s < var.states.size(); ++s) out << (s ? ", " : "") << var.states[s];
        out << " };\n}\n";
    }
    for (std::size_t v = 0; v < bn.variables.size(); ++v) {
        const Cpt& cpt = bn.cpts[v];
        out << "probability ( " << bn.variables[v].name;
        for (std::size_t i = 0; i < cpt.parents.size(); ++i)
            out << (i ? ", " : " | ") << bn.variables[cpt.parents[i]].name;
        out << " ) {\n";
        auto write_row = [&](std::size_t j) {
            auto row = cpt.row(j);
            for (std::size_t k = 0; k < row.size(); ++k) out << (k ? ", " : "") << format_double(row[k]);
            out << ";\n";
        };
        if (cpt.parents.empty()) {
            out << "  table ";
            write_row(0);
        } else {
            std::vector<StateIndex> states(cpt.parents.size(), 0);
            for (std::size_t j = 0; j < cpt.num_rows(); ++j) {
                out << "  (";
                for (std::size_t i = 0; i < states.size(); ++i)
                    out << (i ? ", " : "") << bn.variables[cpt.parents[i]].states[states[i]];
                out << ") ";
                write_row(j);
                for (std::size_t i = states.size(); i-- > 0;) {
                    if (++states[i] < bn.variables[cpt.parents[i]].cardinality()) break;
                    states[i] = 0;
                }
            }
        }
        out << "}\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------- sampling

Dataset forward_sample(const BayesianNetwork& bn, std::size_t rows, std::uint64_t seed) {
    const std::size_t n = bn.size();
    const auto order = topological_order(bn.dag);
    std::vector<std::vector<StateIndex>> columns(n, std::vector<StateIndex>(rows));
    std::mt19937_64 rng(seed);
    std::vector<StateIndex> parent_states;
    for (std::size_t row = 0; row < rows; ++row) {
        for (VariableId v : order) {
            const Cpt& cpt = bn.cpts[v];
            parent_states.clear();
            for (VariableId p : cpt.parents) parent_states.push_back(columns[p][row]);
            auto probs = cpt.row(bn.config_index(v, parent_states));
            const double u = detail::uniform01(rng);
            double cumulative = 0.0;
            std::size_t chosen = probs.size();
            std::size_t last_positive = 0;
            for (std::size_t k = 0; k < probs.size(); ++k) {
                if (probs[k] > 0.0) last_positive = k;
                cumulative += probs[k];
                if (u < cumulative) {
                    chosen = k;
                    break;
                }
            }
            // Rounding can leave the cumulative sum just below u.
            if (chosen == probs.size()) chosen = last_positive;
            columns[v][row] = static_cast<StateIndex>(chosen);
        }
    }
    return Dataset(bn.variables, std::move(columns));
}

// ---------------------------------------------------------------------------- CSV

namespace {

std::vector<std::vector<std::string>> split_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        start = end + 1;
        if (line.empty() && start >= text.size()) break;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            std::string_view cell = line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
            while (!cell.empty() && (cell.front() == ' ' || cell.front() == '"')) cell.remove_prefix(1);
            while (!cell.empty() && (cell.back() == ' ' || cell.back() == '"')) cell.remove_suffix(1);
            fields.emplace_back(cell);
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        records.push_back(std::move(fields));
    }
    return records;
}

std::vector<std::vector<std::string>> checked_records(std::string_view text) {
    auto records = split_csv(text);
    if (records.empty()) throw EmptyColumn("csv: missing header row");
    const std::size_t width = records.front().size();
    for (std::size_t c = 0; c < width; ++c)
        if (records.front()[c].empty()) throw EmptyColumn("csv: header column " + std::to_string(c + 1) + " has no name");
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != width)
            throw RaggedRow("csv: line " + std::to_string(r + 1) + " has " + std::to_string(records[r].size()) + " fields, expected " + std::to_string(width));
        for (std::size_t c = 0; c < width; ++c)
            if (records[r][c].empty() || records[r][c] == "?")
                throw MissingValueFound("csv: missing value at line " + std::to_string(r + 1) + ", column '" + records.front()[c] + "'");
    }
    return records;
}

}  // namespace

Dataset load_csv(std::string_view text) {
    auto records = checked_records(text);
    const auto& header = records.front();
    const std::size_t rows = records.size() - 1;
    std::vector<Variable> variables;
    std::vector<std::vector<StateIndex>> columns;
    for (std::size_t c = 0; c < header.size(); ++c) {
        std::set<std::string> observed;
        for (std::size_t r = 1; r <= rows; ++r) observed.insert(records[r][c]);
        if (observed.empty()) throw EmptyColumn("csv: column '" + header[c] + "' has no values");
        if (observed.size() < 2)
            throw CardinalityError("csv: column '" + header[c] + "' has a single observed state; categorical variables need at least two");
        if (observed.size() > std::numeric_limits<StateIndex>::max()) throw CardinalityError("csv: too many states in '" + header[c] + "'");
        Variable var{header[c], std::vector<std::string>(observed.begin(), observed.end())};
        std::map<std::string, StateIndex, std::less<>> index;
        for (std::size_t s = 0; s < var.states.size(); ++s) index.emplace(var.states[s], static_cast<StateIndex>(s));
        std::vector<StateIndex> column(rows);
        for (std::size_t r = 1; r <= rows; ++r) column[r - 1] = index.at(records[r][c]);
        variables.push_back(std::move(var));
        columns.push_back(std::move(column));
    }
    return Dataset(std::move(variables), std::move(columns));
}

Dataset load_csv(std::string_view text, std::span<const Variable> schema) {
    auto records = checked_records(text);
    const auto& header = records.front();
    const std::size_t rows = records.size() - 1;
    std::vector<std::vector<StateIndex>> columns(schema.size());
    std::vector<char> filled(schema.size(), 0);
    for (std::size_t c = 0; c < header.size(); ++c) {
        auto it = std::find_if(schema.begin(), schema.end(), [&](const Variable& v) { return v.name == header[c]; });
        if (it == schema.end()) throw VariableMismatch("csv: column '" + header[c] + "' is not a network variable");
        const auto v = static_cast<std::size_t>(it - schema.begin());
        if (filled[v]) throw VariableMismatch("csv: column '" + header[c] + "' appears twice");
        filled[v] = 1;
        std::map<std::string, StateIndex, std::less<>> index;
        for (std::size_t s = 0; s < it->states.size(); ++s) index.emplace(it->states[s], static_cast<StateIndex>(s));
        auto& column = columns[v];
        column.resize(rows);
        for (std::size_t r = 1; r <= rows; ++r) {
            auto found = index.find(records[r][c]);
            if (found == index.end())
                throw ValidationError("csv: '" + records[r][c] + "' is not a state of '" + it->name + "' (line " + std::to_string(r + 1) + ")");
            column[r - 1] = found->second;
        }
    }
    for (std::size_t v = 0; v < schema.size(); ++v)
        if (!filled[v]) throw VariableMismatch("csv: network variable '" + schema[v].name + "' has no column");
    return Dataset(std::vector<Variable>(schema.begin(), schema.end()), std::move(columns));
}

Dataset read_csv_file(const std::string& path) { return load_csv(read_text_file(path)); }

Dataset read_csv_file(const std::string& path, std::span<const Variable> schema) {
    return load_csv(read_text_file(path), schema);
}

std::string write_csv(const Dataset& data) {
    std::string out;
    const auto n = static_cast<VariableId>(data.num_variables());
    for (VariableId v = 0; v < n; ++v) {
        if (v) out += ',';
        out += data.variable(v).name;
    }
    out += '\n';
    for (std::size_t r = 0; r < data.num_rows(); ++r) {
        for (VariableId v = 0; v < n; ++v) {
            if (v) out += ',';
            out += data.variable(v).states[data.at(r, v)];
        }
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw DataError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------- synthetic networks

BayesianNetwork random_network(std::size_t n, std::size_t max_parents, std::size_t max_states, std::uint64_t seed) {
    if (max_states < 2) throw std::invalid_argument("random_network: max_states must be at least 2");
    std::mt19937_64 rng(seed);
    BayesianNetwork bn;
    bn.name = "random" + std::to_string(n);
    bn.dag = Dag(n);
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t card = 2 + detail::uniform_index(rng, max_states - 1);
        Variable var{"X" + std::to_string(v), {}};
        for (std::size_t s = 0; s < card; ++s) var.states.push_back("s" + std::to_string(s));
        bn.variables.push_back(std::move(var));
    }
    bn.cpts.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t limit = std::min(max_parents, v);
        const std::size_t count = detail::uniform_index(rng, limit + 1);
        std::vector<VariableId> candidates(v);
        for (std::size_t i = 0; i < v; ++i) candidates[i] = static_cast<VariableId>(i);
        std::vector<VariableId> parents;
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t pick = detail::uniform_index(rng, candidates.size());
            parents.push_back(candidates[pick]);
            candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        std::sort(parents.begin(), parents.end());
        std::size_t q = 1;
        for (VariableId p : parents) {
            bn.dag.add_arc(p, static_cast<VariableId>(v));
            q *= bn.variables[p].cardinality();
        }
        const std::size_t r = bn.variables[v].cardinality();
        Cpt cpt{parents, std::vector<double>(q * r), r};
        for (std::size_t j = 0; j < q; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < r; ++k) {
                // Flat Dirichlet via normalized exponentials.
                const double e = -std::log1p(-detail::uniform01(rng));
                cpt.probabilities[j * r + k] = e;
                sum += e;
            }
            for (std::size_t k = 0; k < r; ++k) cpt.probabilities[j * r + k] /= sum;
        }
        bn.cpts[v] = std::move(cpt);
    }
    return bn;
}

}  // namespace cges
