#include "src/problem/spec_file.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "src/support/error.hpp"
#include "src/support/format.hpp"

namespace fbsdde {

namespace {

struct Entry {
    std::string value;
    std::size_t line;
};

struct Section {
    std::string name;
    std::size_t line;
    std::map<std::string, Entry> entries;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

class Parser {
public:
    explicit Parser(std::string_view source) : source_(source) {}

    [[noreturn]] void fail(std::size_t line, const std::string& field, const std::string& msg) const {
        std::ostringstream os;
        os << source_ << ":" << line << ": " << msg;
        throw ParseError(line, field, os.str());
    }

    std::vector<Section> split(std::string_view text) const {
        static const char* kSections[] = {"problem", "f", "g", "b", "sigma"};
        std::vector<Section> sections;
        std::size_t line_no = 0;
        while (!text.empty()) {
            ++line_no;
            const auto nl = text.find('\n');
            std::string_view line = text.substr(0, nl);
            text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

            const auto hash = line.find_first_of("#;");
            if (hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;

            if (line.front() == '[') {
                if (line.back() != ']') fail(line_no, "", "unterminated section header");
                const std::string name(trim(line.substr(1, line.size() - 2)));
                if (std::find(std::begin(kSections), std::end(kSections), name) == std::end(kSections)) {
                    fail(line_no, name, "unknown section [" + name + "]");
                }
                for (const auto& s : sections) {
                    if (s.name == name) fail(line_no, name, "duplicate section [" + name + "]");
                }
                sections.push_back({name, line_no, {}});
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) fail(line_no, "", "expected 'key = value'");
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.empty()) fail(line_no, "", "empty key");
            if (sections.empty()) fail(line_no, key, "key '" + key + "' outside of any section");
            auto& entries = sections.back().entries;
            if (entries.count(key)) {
                fail(line_no, key, "duplicate key '" + key + "' in section [" + sections.back().name + "]");
            }
            entries.emplace(key, Entry{value, line_no});
        }
        return sections;
    }

    const Entry& require(const Section& s, const std::string& key) const {
        const auto it = s.entries.find(key);
        if (it == s.entries.end()) {
            fail(s.line, key, "section [" + s.name + "]: missing required field '" + key + "'");
        }
        return it->second;
    }

    const Entry* optional(const Section& s, const std::string& key) const {
        const auto it = s.entries.find(key);
        return it == s.entries.end() ? nullptr : &it->second;
    }

    void reject_unknown(const Section& s, std::initializer_list<const char*> allowed) const {
        for (const auto& [key, entry] : s.entries) {
            if (std::find_if(allowed.begin(), allowed.end(),
                             [&](const char* a) { return key == a; }) == allowed.end()) {
                fail(entry.line, key, "unknown key '" + key + "' in section [" + s.name + "]");
            }
        }
    }

    double number(const Entry& e, const std::string& key) const {
        const auto v = parse_number(e.value);
        if (!v) fail(e.line, key, "field '" + key + "': '" + e.value + "' is not a number");
        return *v;
    }

    std::vector<double> list(const Entry& e, const std::string& key) const {
        std::vector<double> out;
        std::string_view rest = trim(e.value);
        if (rest.empty()) return out;
        while (true) {
            const auto comma = rest.find(',');
            const auto item = trim(rest.substr(0, comma));
            const auto v = parse_number(item);
            if (!v) {
                fail(e.line, key, "field '" + key + "': '" + std::string(item) + "' is not a number");
            }
            out.push_back(*v);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        return out;
    }

    TerminalRule terminal(const Entry& e) const {
        const std::string_view v = e.value;
        const auto open = v.find('(');
        if (open == std::string_view::npos || v.back() != ')') {
            fail(e.line, "xi", "field 'xi': expected '<rule>(<params>)', got '" + e.value + "'");
        }
        const std::string name(trim(v.substr(0, open)));
        const Entry inner{std::string(v.substr(open + 1, v.size() - open - 2)), e.line};
        try {
            return TerminalRule(name, list(inner, "xi"));
        } catch (const ParseError&) {
            throw;
        } catch (const Error& err) {
            fail(e.line, "xi", std::string("field 'xi': ") + err.what());
        }
    }

    GeneratorSpec coefficient(const Section& s, CoefficientKind kind, double horizon) const {
        reject_unknown(s, {"fn", "params", "alpha_lags", "alpha_weights", "lipschitz_K"});
        const Entry& fn = require(s, "fn");
        const Entry& K = require(s, "lipschitz_K");
        std::vector<double> params;
        if (const Entry* p = optional(s, "params")) params = list(*p, "params");

        std::vector<double> lags{0.0};
        std::size_t alpha_line = s.line;
        const Entry* lag_entry = optional(s, "alpha_lags");
        const Entry* weight_entry = optional(s, "alpha_weights");
        if (weight_entry && !lag_entry) {
            fail(weight_entry->line, "alpha_lags", "section [" + s.name +
                                                       "]: alpha_weights given without alpha_lags");
        }
        if (lag_entry) {
            lags = list(*lag_entry, "alpha_lags");
            alpha_line = lag_entry->line;
            if (lags.empty()) fail(lag_entry->line, "alpha_lags", "field 'alpha_lags' is empty");
        }
        std::vector<double> weights(lags.size(), 1.0 / static_cast<double>(lags.size()));
        if (weight_entry) {
            weights = list(*weight_entry, "alpha_weights");
            if (weights.size() != lags.size()) {
                fail(weight_entry->line, "alpha_weights",
                     "field 'alpha_weights' has " + std::to_string(weights.size()) +
                         " entries but alpha_lags has " + std::to_string(lags.size()));
            }
        }

        std::vector<DelayAtom> atoms;
        for (std::size_t k = 0; k < lags.size(); ++k) atoms.push_back({lags[k], weights[k]});
        std::optional<DelayMeasure> alpha;
        try {
            alpha.emplace(std::move(atoms), horizon);
        } catch (const Error& err) {
            fail(alpha_line, "alpha_lags", "section [" + s.name + "]: " + err.what());
        }

        std::optional<PointwiseFunction> pointwise;
        try {
            pointwise.emplace(PointwiseFunction::from_catalog(fn.value, params));
        } catch (const Error& err) {
            fail(fn.line, "fn", "section [" + s.name + "]: " + err.what());
        }
        const double k_value = number(K, "lipschitz_K");
        try {
            return GeneratorSpec(kind, std::move(*pointwise), std::move(*alpha), k_value);
        } catch (const Error& err) {
            fail(K.line, "lipschitz_K", "section [" + s.name + "]: " + err.what());
        }
    }

private:
    std::string source_;
};

}  // namespace

ProblemSpec parse_problem_spec(std::string_view text, std::string_view source) {
    Parser parser(source);
    const auto sections = parser.split(text);
    auto find = [&](const char* name) -> const Section* {
        for (const auto& s : sections) {
            if (s.name == name) return &s;
        }
        return nullptr;
    };

    const Section* problem = find("problem");
    if (!problem) parser.fail(1, "problem", "missing required section [problem]");
    parser.reject_unknown(*problem, {"mode", "T", "x", "xi"});

    const Entry& mode_entry = parser.require(*problem, "mode");
    ProblemMode mode;
    if (mode_entry.value == "bsde") {
        mode = ProblemMode::Bsde;
    } else if (mode_entry.value == "fbsdde") {
        mode = ProblemMode::Fbsdde;
    } else {
        parser.fail(mode_entry.line, "mode", "field 'mode': expected 'bsde' or 'fbsdde', got '" +
                                                 mode_entry.value + "'");
    }
    const Entry& T_entry = parser.require(*problem, "T");
    const double horizon = parser.number(T_entry, "T");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        parser.fail(T_entry.line, "T", "field 'T' must be a positive finite number");
    }
    double x = 0.0;
    if (mode == ProblemMode::Fbsdde) {
        x = parser.number(parser.require(*problem, "x"), "x");
    } else if (const Entry* e = parser.optional(*problem, "x")) {
        parser.fail(e->line, "x", "field 'x' is only meaningful in fbsdde mode");
    }
    const TerminalRule xi = parser.terminal(parser.require(*problem, "xi"));

    const Section* f = find("f");
    if (!f) parser.fail(problem->line, "f", "missing required section [f]");

    auto optional_coefficient = [&](const char* name, CoefficientKind kind) -> std::optional<GeneratorSpec> {
        const Section* s = find(name);
        if (!s) return std::nullopt;
        if (mode == ProblemMode::Bsde && (kind == CoefficientKind::DriftB ||
                                          kind == CoefficientKind::DiffusionSigma)) {
            parser.fail(s->line, name, std::string("section [") + name + "] is only allowed in fbsdde mode");
        }
        return parser.coefficient(*s, kind, horizon);
    };

    ProblemSpec spec{
        .mode = mode,
        .horizon = horizon,
        .xi = xi,
        .initial_x = x,
        .f = parser.coefficient(*f, CoefficientKind::DriverF, horizon),
        .g = optional_coefficient("g", CoefficientKind::DiffusionG),
        .b = optional_coefficient("b", CoefficientKind::DriftB),
        .sigma = optional_coefficient("sigma", CoefficientKind::DiffusionSigma),
    };
    try {
        validate(spec);
    } catch (const Error& err) {
        parser.fail(problem->line, "", err.what());
    }
    return spec;
}

ProblemSpec load_problem_spec(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(0, "", path.string() + ": cannot open problem file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_spec(buf.str(), path.string());
}

namespace {

void write_coefficient(std::ostringstream& os, const GeneratorSpec& c) {
    const auto& catalog = c.fn().catalog();
    if (!catalog) {
        throw Error(ErrorCode::InvalidArgument, "coefficient " + std::string(section_name(c.kind())) +
                                                    " uses a custom function and cannot be serialized");
    }
    std::vector<double> lags, weights;
    for (const auto& a : c.alpha().atoms()) {
        lags.push_back(a.lag);
        weights.push_back(a.weight);
    }
    os << "\n[" << section_name(c.kind()) << "]\n"
       << "fn = " << catalog->name << "\n"
       << "params = " << join_numbers(catalog->params) << "\n"
       << "alpha_lags = " << join_numbers(lags) << "\n"
       << "alpha_weights = " << join_numbers(weights) << "\n"
       << "lipschitz_K = " << format_number(c.lipschitz_K()) << "\n";
}

}  // namespace

std::string serialize_problem_spec(const ProblemSpec& spec) {
    std::ostringstream os;
    os << "[problem]\n"
       << "mode = " << to_string(spec.mode) << "\n"
       << "T = " << format_number(spec.horizon) << "\n";
    if (spec.mode == ProblemMode::Fbsdde) os << "x = " << format_number(spec.initial_x) << "\n";
    os << "xi = " << spec.xi.to_string() << "\n";
    write_coefficient(os, spec.f);
    if (spec.g) write_coefficient(os, *spec.g);
    if (spec.b) write_coefficient(os, *spec.b);
    if (spec.sigma) write_coefficient(os, *spec.sigma);
    return os.str();
}

}  // namespace fbsdde
