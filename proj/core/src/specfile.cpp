#include "subweyl/specfile.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace subweyl {

namespace {

struct RawEntry {
    std::string key, value;
    int line;
};

struct RawDoc {
    std::map<std::string, std::vector<RawEntry>> sections;
    std::vector<std::string> order;
};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

RawDoc tokenize(const std::string& text) {
    RawDoc doc;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') parse_fail(lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) parse_fail(lineno, "empty section name");
            if (!doc.sections.count(section)) doc.order.push_back(section);
            doc.sections[section];
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) parse_fail(lineno, "expected 'key = value'");
        if (section.empty()) parse_fail(lineno, "entry outside any section");
        doc.sections[section].push_back(
            RawEntry{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno});
    }
    return doc;
}

double parse_real(const RawEntry& e) {
    char* end = nullptr;
    double v = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || trim(end)[0] != '\0')
        parse_fail(e.line, "expected a real number, got '" + e.value + "'");
    return v;
}

int parse_int(const RawEntry& e) {
    double v = parse_real(e);
    if (v != std::floor(v)) parse_fail(e.line, "expected an integer");
    return int(v);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) out.push_back(trim(cur));
    return out;
}

const RawEntry* find_entry(const std::vector<RawEntry>& sec, const std::string& key) {
    for (const auto& e : sec)
        if (e.key == key) return &e;
    return nullptr;
}

const RawEntry& require_entry(const std::vector<RawEntry>& sec,
                              const std::string& key, const std::string& section) {
    const RawEntry* e = find_entry(sec, key);
    if (!e) throw ValidationError("missing '" + key + "' in [" + section + "]");
    return *e;
}

Expr parse_checked(const std::string& text, const SymbolTable& syms, int line) {
    try {
        return Expr::parse(text, syms);
    } catch (const SyntaxError& e) {
        parse_fail(line, e.what());
    }
    // UnknownSymbol propagates with its own name
}

void read_constants(const RawDoc& doc, std::vector<std::string>& names,
                    std::vector<double>& vals) {
    auto it = doc.sections.find("constants");
    if (it == doc.sections.end()) return;
    for (const auto& e : it->second) {
        names.push_back(e.key);
        vals.push_back(parse_real(e));
    }
}

Box read_domain(const RawDoc& doc, const std::vector<std::string>& coords) {
    Box box;
    box.range.assign(coords.size(), {-1.0, 1.0});
    auto it = doc.sections.find("domain");
    if (it == doc.sections.end()) return box;
    for (const auto& e : it->second) {
        auto c = std::find(coords.begin(), coords.end(), e.key);
        if (c == coords.end())
            throw ValidationError("domain entry for unknown coordinate '" + e.key + "'");
        auto parts = split_csv(e.value);
        if (parts.size() != 2) parse_fail(e.line, "domain wants 'lo, hi'");
        double lo = std::strtod(parts[0].c_str(), nullptr);
        double hi = std::strtod(parts[1].c_str(), nullptr);
        if (!(lo < hi)) throw EmptyDomain("empty interval for '" + e.key + "'");
        box.range[size_t(c - coords.begin())] = {lo, hi};
    }
    return box;
}

void check_unique_names(const std::vector<std::string>& names) {
    for (size_t i = 0; i < names.size(); ++i) {
        if (names[i].empty()) throw ValidationError("empty symbol name");
        for (size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j])
                throw ValidationError("duplicate symbol name '" + names[i] + "'");
    }
}

ManifoldSpec build_manifold(const RawDoc& doc, const std::string& name) {
    const auto& sec = doc.sections.at("manifold");
    ManifoldSpec spec;
    spec.name = name;
    spec.n = parse_int(require_entry(sec, "n", "manifold"));
    spec.p = parse_int(require_entry(sec, "p", "manifold"));
    if (spec.n < 1 || spec.p < 0)
        throw ValidationError("need n >= 1 and p >= 0");
    spec.coords = split_csv(require_entry(sec, "coords", "manifold").value);
    if (int(spec.coords.size()) != spec.n + spec.p)
        throw ValidationError("expected " + std::to_string(spec.n + spec.p) +
                              " coordinate names, got " +
                              std::to_string(spec.coords.size()));
    read_constants(doc, spec.constant_names, spec.constant_values);
    std::vector<std::string> all = spec.coords;
    all.insert(all.end(), spec.constant_names.begin(), spec.constant_names.end());
    check_unique_names(all);

    SymbolTable syms = spec.symbols();
    const int m = spec.dim();
    spec.metric.assign(m, std::vector<SpecEntry>(m));
    std::vector<std::vector<bool>> seen(m, std::vector<bool>(m, false));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) spec.metric[a][b] = spec.zero_entry();

    auto mit = doc.sections.find("metric");
    if (mit == doc.sections.end() || mit->second.empty())
        throw ValidationError("[metric] section is required for a manifold spec");
    for (const auto& e : mit->second) {
        auto idx = split_csv(e.key);
        if (idx.size() != 2) parse_fail(e.line, "metric key wants 'a,b'");
        int a = std::atoi(idx[0].c_str()), b = std::atoi(idx[1].c_str());
        if (a < 1 || b < 1 || a > m || b > m)
            throw ValidationError("metric index out of range: " + e.key);
        if (seen[a - 1][b - 1])
            parse_fail(e.line, "duplicate metric entry " + e.key);
        seen[a - 1][b - 1] = seen[b - 1][a - 1] = true;
        SpecEntry ent = spec.entry_from(parse_checked(e.value, syms, e.line));
        spec.metric[a - 1][b - 1] = ent;
        spec.metric[b - 1][a - 1] = ent;
    }

    spec.weyl.assign(m, spec.zero_entry());
    auto wit = doc.sections.find("weyl");
    if (wit != doc.sections.end()) {
        for (const auto& e : wit->second) {
            int a = std::atoi(e.key.c_str());
            if (a < 1 || a > m)
                throw ValidationError("weyl index out of range: " + e.key);
            spec.weyl[a - 1] = spec.entry_from(parse_checked(e.value, syms, e.line));
        }
    }

    spec.domain = read_domain(doc, spec.coords);

    // structural block must be invertible at the box center
    try {
        metric_eval(spec, spec.domain.center());
    } catch (const Error& err) {
        throw ValidationError(
            "structural metric block not invertible at the domain center (" +
            std::string(err.what()) + ")");
    }
    return spec;
}

FinslerSpec build_finsler(const RawDoc& doc, const std::string& name) {
    const auto& sec = doc.sections.at("finsler");
    FinslerSpec spec;
    spec.name = name;
    spec.n = parse_int(require_entry(sec, "n", "finsler"));
    if (spec.n < 1) throw ValidationError("need n >= 1");
    spec.base_coords = split_csv(require_entry(sec, "coords", "finsler").value);
    if (int(spec.base_coords.size()) != spec.n)
        throw ValidationError("expected " + std::to_string(spec.n) +
                              " base coordinate names");
    if (const RawEntry* f = find_entry(sec, "fibers")) {
        spec.fiber_coords = split_csv(f->value);
        if (int(spec.fiber_coords.size()) != spec.n)
            throw ValidationError("expected " + std::to_string(spec.n) +
                                  " fiber coordinate names");
    } else {
        for (int i = 0; i < spec.n; ++i)
            spec.fiber_coords.push_back("y" + std::to_string(i + 1));
    }
    read_constants(doc, spec.constant_names, spec.constant_values);
    std::vector<std::string> all = spec.base_coords;
    all.insert(all.end(), spec.fiber_coords.begin(), spec.fiber_coords.end());
    all.insert(all.end(), spec.constant_names.begin(), spec.constant_names.end());
    check_unique_names(all);

    SymbolTable syms = spec.symbols();
    const RawEntry& f = require_entry(sec, "F", "finsler");
    spec.F = parse_checked(f.value, syms, f.line);

    spec.weyl.assign(2 * spec.n, std::nullopt);
    auto wit = doc.sections.find("weyl");
    if (wit != doc.sections.end()) {
        for (const auto& e : wit->second) {
            int a = std::atoi(e.key.c_str());
            if (a < 1 || a > 2 * spec.n)
                throw ValidationError("weyl index out of range: " + e.key);
            spec.weyl[a - 1] = parse_checked(e.value, syms, e.line);
        }
    }

    std::vector<std::string> coords = spec.base_coords;
    coords.insert(coords.end(), spec.fiber_coords.begin(), spec.fiber_coords.end());
    spec.domain = read_domain(doc, coords);

    // validate at the center, with a fiber point outside the exclusion ball
    Vec x(spec.n), y(spec.n);
    for (int i = 0; i < spec.n; ++i) {
        auto [lo, hi] = spec.domain.range[i];
        x[i] = 0.5 * (lo + hi);
        auto [flo, fhi] = spec.domain.range[spec.n + i];
        y[i] = flo + 0.75 * (fhi - flo);
    }
    double ny = 0.0;
    for (double v : y) ny += v * v;
    if (std::sqrt(ny) < 0.1)
        for (int i = 0; i < spec.n; ++i) y[i] = spec.domain.range[spec.n + i][1];
    try {
        JVec vals;
        auto jp = JetPoint::at(tn_point(x, y));
        for (const Jet& c : jp.coord) vals.push_back(c);
        for (double c : spec.constant_values) vals.push_back(jp.lift(c));
        double fval = spec.F.eval(std::span<const Jet>(vals)).value();
        if (!(fval > 0.0))
            throw ValidationError("F is not positive at the validation point");
        hessian_metric(spec, x, y);
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& err) {
        throw ValidationError("fundamental function invalid at the domain center (" +
                              std::string(err.what()) + ")");
    }
    return spec;
}

} // namespace

AnySpec parse_spec_text(const std::string& text, const std::string& name) {
    RawDoc doc = tokenize(text);
    bool has_m = doc.sections.count("manifold") > 0;
    bool has_f = doc.sections.count("finsler") > 0;
    if (has_m == has_f)
        throw ValidationError("exactly one of [manifold]/[finsler] is required");
    if (has_m) return build_manifold(doc, name);
    return build_finsler(doc, name);
}

AnySpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spec file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string stem = path;
    if (size_t slash = stem.find_last_of('/'); slash != std::string::npos)
        stem = stem.substr(slash + 1);
    if (size_t dot = stem.find_last_of('.'); dot != std::string::npos)
        stem = stem.substr(0, dot);
    return parse_spec_text(ss.str(), stem);
}

const std::string& spec_name(const AnySpec& s) {
    return std::visit([](const auto& v) -> const std::string& { return v.name; }, s);
}

const Box& spec_domain(const AnySpec& s) {
    return std::visit([](const auto& v) -> const Box& { return v.domain; }, s);
}

const FixtureTags& spec_tags(const AnySpec& s) {
    return std::visit([](const auto& v) -> const FixtureTags& { return v.tags; }, s);
}

} // namespace subweyl
