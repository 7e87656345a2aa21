#include "eec/config.hpp"

#include "eec/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace eec {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(std::string_view(s).substr(start, pos == std::string::npos ? pos : pos - start)));
        if (pos == std::string::npos)
            return out;
        start = pos + 1;
    }
}

struct Entry {
    std::string value;
    int line = 0;
};

// Key lookup that records which keys were consumed.
class Entries {
public:
    void add(const std::string& key, std::string value, int line)
    {
        if (const auto it = map_.find(key); it != map_.end())
            throw ConfigError(key, line, "duplicate key (first set at line " + std::to_string(it->second.line) + ")");
        map_.emplace(key, Entry{std::move(value), line});
    }

    [[nodiscard]] bool has(const std::string& key) const { return map_.count(key) != 0; }

    [[nodiscard]] bool has_prefix(const std::string& prefix) const
    {
        const auto it = map_.lower_bound(prefix);
        return it != map_.end() && it->first.compare(0, prefix.size(), prefix) == 0;
    }

    const Entry* find(const std::string& key)
    {
        const auto it = map_.find(key);
        if (it == map_.end())
            return nullptr;
        used_.insert(key);
        return &it->second;
    }

    const Entry& require(const std::string& key, const std::string& why)
    {
        if (const Entry* e = find(key))
            return *e;
        throw ConfigError(key, 0, "missing (" + why + ")");
    }

    [[nodiscard]] int line_of(const std::string& key) const
    {
        const auto it = map_.find(key);
        return it == map_.end() ? 0 : it->second.line;
    }

    void reject_unused() const
    {
        for (const auto& [key, entry] : map_)
            if (!used_.count(key))
                throw ConfigError(key, entry.line, "unknown or unused key");
    }

private:
    std::map<std::string, Entry> map_;
    std::set<std::string> used_;
};

double to_double(const std::string& key, const Entry& e, const std::string& text)
{
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ConfigError(key, e.line, "expected a finite number, got '" + text + "'");
    return v;
}

template <class Int>
Int to_int(const std::string& key, const Entry& e, const std::string& text)
{
    Int v{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end)
        throw ConfigError(key, e.line, "expected an integer, got '" + text + "'");
    return v;
}

std::vector<double> to_vector(const std::string& key, const Entry& e, const std::string& text)
{
    std::vector<double> out;
    for (const std::string& item : split(text, ','))
        out.push_back(to_double(key, e, item));
    return out;
}

std::vector<std::vector<double>> to_rows(const std::string& key, const Entry& e)
{
    std::vector<std::vector<double>> out;
    for (const std::string& row : split(e.value, ';'))
        out.push_back(to_vector(key, e, row));
    return out;
}

class Reader {
public:
    explicit Reader(Entries& entries) : entries_(entries) {}

    std::optional<double> number(const std::string& key)
    {
        const Entry* e = entries_.find(key);
        return e ? std::optional(to_double(key, *e, e->value)) : std::nullopt;
    }

    template <class Int>
    std::optional<Int> integer(const std::string& key)
    {
        const Entry* e = entries_.find(key);
        return e ? std::optional(to_int<Int>(key, *e, e->value)) : std::nullopt;
    }

    std::optional<std::vector<double>> vector(const std::string& key)
    {
        const Entry* e = entries_.find(key);
        return e ? std::optional(to_vector(key, *e, e->value)) : std::nullopt;
    }

    std::optional<std::vector<std::vector<double>>> rows(const std::string& key)
    {
        const Entry* e = entries_.find(key);
        return e ? std::optional(to_rows(key, *e)) : std::nullopt;
    }

    std::optional<std::string> text(const std::string& key)
    {
        const Entry* e = entries_.find(key);
        return e ? std::optional(e->value) : std::nullopt;
    }

    double required_number(const std::string& key, const std::string& why)
    {
        const Entry& e = entries_.require(key, why);
        return to_double(key, e, e.value);
    }

    std::vector<double> required_vector(const std::string& key, const std::string& why)
    {
        const Entry& e = entries_.require(key, why);
        return to_vector(key, e, e.value);
    }

    std::vector<std::vector<double>> required_rows(const std::string& key, const std::string& why)
    {
        return to_rows(key, entries_.require(key, why));
    }

private:
    Entries& entries_;
};

Entries tokenize(const std::string& text)
{
    Entries entries;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty())
            continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3)
                throw ConfigError("", line, "malformed section header '" + s + "'");
            section = trim(std::string_view(s).substr(1, s.size() - 2));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", line, "expected 'key = value', got '" + s + "'");
        const std::string key = trim(std::string_view(s).substr(0, eq));
        std::string value = trim(std::string_view(s).substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (key.empty())
            throw ConfigError("", line, "empty key");
        entries.add(section.empty() ? key : section + "." + key, std::move(value), line);
    }
    return entries;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<Eigen::VectorXd> to_eigen(const std::vector<std::vector<double>>& rows)
{
    std::vector<Eigen::VectorXd> out;
    out.reserve(rows.size());
    for (const auto& r : rows)
        out.push_back(to_eigen(r));
    return out;
}

void check_family_keys(Entries& entries, const std::string& section, const std::string& family,
                       const std::set<std::string>& allowed, const std::set<std::string>& all)
{
    for (const std::string& k : all)
        if (!allowed.count(k) && entries.has(section + "." + k))
            throw ConfigError(section + "." + k, entries.line_of(section + "." + k),
                              "not used by " + section + ".family = " + family);
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const
{
    const auto& q = quadrature;
    const auto& s = sphere_quadrature;
    return domain == o.domain && lo == o.lo && hi == o.hi && sphere_dim == o.sphere_dim && noise == o.noise &&
           mean == o.mean && levels == o.levels && q.nodes_per_axis == o.quadrature.nodes_per_axis &&
           q.nodes_x == o.quadrature.nodes_x && q.orthant_points == o.quadrature.orthant_points &&
           s.colatitude_nodes == o.sphere_quadrature.colatitude_nodes &&
           s.longitude_nodes == o.sphere_quadrature.longitude_nodes && s.nodes_x == o.sphere_quadrature.nodes_x &&
           s.longitude_offset == o.sphere_quadrature.longitude_offset && bracket == o.bracket &&
           sphere_derivatives == o.sphere_derivatives && mc == o.mc &&
           matrix_samples == o.matrix_samples && output_path == o.output_path && mc_csv == o.mc_csv;
}

int RunConfig::dim() const noexcept
{
    return domain == DomainKind::Rectangle ? static_cast<int>(lo.size()) : sphere_dim;
}

RunConfig parse_config(const std::string& text)
{
    Entries entries = tokenize(text);
    Reader read(entries);
    RunConfig c;

    const std::string domain = read.text("domain").value_or(read.text("domain.kind").value_or(""));
    const int domain_line = std::max(entries.line_of("domain"), entries.line_of("domain.kind"));
    if (entries.has("domain") && entries.has("domain.kind"))
        throw ConfigError("domain", domain_line, "exactly one domain may be given");
    if (domain == "rectangle") {
        c.domain = DomainKind::Rectangle;
        c.lo = read.required_vector("domain.lo", "rectangle lower corner");
        c.hi = read.required_vector("domain.hi", "rectangle upper corner");
        if (c.lo.size() != c.hi.size())
            throw ConfigError("domain.hi", entries.line_of("domain.hi"), "lo and hi differ in length");
        if (c.lo.empty() || c.lo.size() > 4)
            throw ConfigError("domain.lo", entries.line_of("domain.lo"), "rectangle dimension must be 1..4");
        if (entries.has("domain.dim"))
            throw ConfigError("domain.dim", entries.line_of("domain.dim"), "only valid for domain = sphere");
    }
    else if (domain == "sphere") {
        c.domain = DomainKind::Sphere;
        c.sphere_dim = read.integer<int>("domain.dim").value_or(0);
        if (c.sphere_dim < 1 || c.sphere_dim > 4)
            throw ConfigError("domain.dim", entries.line_of("domain.dim"), "sphere dimension must be 1..4");
        for (const char* k : {"domain.lo", "domain.hi"})
            if (entries.has(k))
                throw ConfigError(k, entries.line_of(k), "only valid for domain = rectangle");
    }
    else if (domain.empty()) {
        throw ConfigError("domain", 0, "missing (rectangle or sphere)");
    }
    else {
        throw ConfigError("domain", domain_line, "unknown domain '" + domain + "' (rectangle or sphere)");
    }

    const std::set<std::string> noise_keys{"length_scale", "frequencies", "weights", "coeffs", "ratio"};
    c.noise.family = read.text("noise.family").value_or("");
    const int noise_line = entries.line_of("noise.family");
    if (c.domain == DomainKind::Rectangle) {
        if (c.noise.family == "squared_exponential") {
            check_family_keys(entries, "noise", c.noise.family, {"length_scale"}, noise_keys);
            c.noise.length_scale = read.required_number("noise.length_scale", "squared_exponential length scale");
        }
        else if (c.noise.family == "cosine_mixture") {
            check_family_keys(entries, "noise", c.noise.family, {"frequencies", "weights"}, noise_keys);
            c.noise.frequencies = read.required_rows("noise.frequencies", "cosine_mixture frequencies");
            c.noise.weights = read.required_vector("noise.weights", "cosine_mixture weights");
        }
        else {
            throw ConfigError("noise.family", noise_line,
                              "rectangle noise must be squared_exponential or cosine_mixture, got '" +
                                  c.noise.family + "'");
        }
    }
    else {
        if (c.noise.family != "schoenberg")
            throw ConfigError("noise.family", noise_line, "sphere noise must be schoenberg, got '" + c.noise.family + "'");
        check_family_keys(entries, "noise", c.noise.family, {"coeffs", "ratio"}, noise_keys);
        if (entries.has("noise.coeffs") == entries.has("noise.ratio"))
            throw ConfigError("noise.coeffs", noise_line, "give exactly one of noise.coeffs and noise.ratio");
        c.noise.coeffs = read.vector("noise.coeffs").value_or(std::vector<double>{});
        c.noise.ratio = read.number("noise.ratio");
    }

    const std::set<std::string> mean_keys{"gradient", "center", "curvature", "amplitudes", "frequencies"};
    c.mean.family = read.text("mean.family").value_or("constant");
    c.mean.c = read.number("mean.c").value_or(0.0);
    if (c.mean.family == "constant") {
        check_family_keys(entries, "mean", c.mean.family, {}, mean_keys);
    }
    else if (c.mean.family == "linear") {
        check_family_keys(entries, "mean", c.mean.family, {"gradient"}, mean_keys);
        c.mean.gradient = read.required_vector("mean.gradient", "linear mean gradient");
    }
    else if (c.mean.family == "quadratic_bump") {
        check_family_keys(entries, "mean", c.mean.family, {"center", "curvature"}, mean_keys);
        c.mean.center = read.required_vector("mean.center", "quadratic_bump center");
        c.mean.curvature = read.required_rows("mean.curvature", "quadratic_bump curvature");
    }
    else if (c.mean.family == "cosine_product") {
        check_family_keys(entries, "mean", c.mean.family, {"amplitudes", "frequencies"}, mean_keys);
        c.mean.amplitudes = read.required_vector("mean.amplitudes", "cosine_product amplitudes");
        c.mean.frequencies = read.required_rows("mean.frequencies", "cosine_product frequencies");
    }
    else {
        throw ConfigError("mean.family", entries.line_of("mean.family"), "unknown mean family '" + c.mean.family + "'");
    }

    c.levels = read.required_vector("levels", "list of levels u");
    if (!std::is_sorted(c.levels.begin(), c.levels.end()))
        throw ConfigError("levels", entries.line_of("levels"), "levels must be sorted in non-decreasing order");

    auto positive = [&](const std::string& key, auto value) {
        if (value <= 0)
            throw ConfigError(key, entries.line_of(key), "must be positive");
        return value;
    };
    if (auto v = read.integer<int>("quadrature.nodes_per_axis"))
        c.quadrature.nodes_per_axis = positive("quadrature.nodes_per_axis", *v);
    if (auto v = read.integer<int>("quadrature.nodes_x")) {
        c.quadrature.nodes_x = positive("quadrature.nodes_x", *v);
        c.sphere_quadrature.nodes_x = *v;
    }
    if (auto v = read.integer<std::size_t>("quadrature.orthant_points")) {
        if (*v < (std::size_t{1} << 16))
            throw ConfigError("quadrature.orthant_points", entries.line_of("quadrature.orthant_points"),
                              "at least 65536 points are required");
        c.quadrature.orthant_points = *v;
    }
    if (auto v = read.integer<int>("quadrature.colatitude_nodes"))
        c.sphere_quadrature.colatitude_nodes = positive("quadrature.colatitude_nodes", *v);
    if (auto v = read.integer<int>("quadrature.longitude_nodes"))
        c.sphere_quadrature.longitude_nodes = positive("quadrature.longitude_nodes", *v);
    if (auto v = read.number("quadrature.longitude_offset"))
        c.sphere_quadrature.longitude_offset = *v;

    if (auto v = read.text("formula.bracket")) {
        if (*v == "residual")
            c.bracket = BracketArgument::Residual;
        else if (*v == "printed")
            c.bracket = BracketArgument::Level;
        else
            throw ConfigError("formula.bracket", entries.line_of("formula.bracket"), "expected residual or printed");
    }

    if (auto v = read.text("formula.sphere_derivatives")) {
        if (c.domain != DomainKind::Sphere)
            throw ConfigError("formula.sphere_derivatives", entries.line_of("formula.sphere_derivatives"),
                              "only valid for domain = sphere");
        if (*v == "frame")
            c.sphere_derivatives = SphereDerivatives::Frame;
        else if (*v == "chart")
            c.sphere_derivatives = SphereDerivatives::Chart;
        else
            throw ConfigError("formula.sphere_derivatives", entries.line_of("formula.sphere_derivatives"),
                              "expected frame or chart");
    }

    if (entries.has_prefix("mc.")) {
        McSpec mc;
        if (auto v = read.integer<int>("mc.samples"))
            mc.samples = positive("mc.samples", *v);
        if (auto v = read.integer<std::uint64_t>("mc.seed"))
            mc.seed = *v;
        if (auto v = read.integer<int>("mc.block"))
            mc.block = positive("mc.block", *v);
        if (auto v = read.number("mc.allowance")) {
            if (*v < 0.0)
                throw ConfigError("mc.allowance", entries.line_of("mc.allowance"), "must be non-negative");
            mc.allowance = *v;
        }
        if (c.domain == DomainKind::Rectangle) {
            if (entries.has("mc.icosphere_level"))
                throw ConfigError("mc.icosphere_level", entries.line_of("mc.icosphere_level"),
                                  "only valid for domain = sphere");
            const Entry& e = entries.require("mc.grid", "lattice node counts per axis");
            std::size_t points = 1;
            for (const std::string& item : split(e.value, ',')) {
                const int n = to_int<int>("mc.grid", e, item);
                if (n < 2)
                    throw ConfigError("mc.grid", e.line, "each axis needs at least 2 nodes");
                mc.grid.push_back(n);
                points *= static_cast<std::size_t>(n);
            }
            if (mc.grid.size() != c.lo.size())
                throw ConfigError("mc.grid", e.line, "one node count per rectangle axis is required");
            if (points > max_design_points)
                throw ConfigError("mc.grid", e.line, "at most 4000 design points are supported");
        }
        else {
            if (entries.has("mc.grid"))
                throw ConfigError("mc.grid", entries.line_of("mc.grid"), "only valid for domain = rectangle");
            if (c.sphere_dim != 2)
                throw ConfigError("mc", entries.line_of("domain.dim"), "sphere Monte-Carlo requires domain.dim = 2");
            if (auto v = read.integer<int>("mc.icosphere_level"))
                mc.icosphere_level = *v;
            if (mc.icosphere_level < 0 || mc.icosphere_level > 4)
                throw ConfigError("mc.icosphere_level", entries.line_of("mc.icosphere_level"), "must be 0..4");
        }
        c.mc = mc;
    }

    if (auto v = read.integer<std::size_t>("verify.matrix_samples"))
        c.matrix_samples = positive("verify.matrix_samples", *v);
    c.output_path = read.text("output.path").value_or("");
    c.mc_csv = read.text("output.mc_csv").value_or("");

    entries.reject_unused();

    // Model construction doubles as validation of the numeric content.
    try {
        if (c.domain == DomainKind::Rectangle) {
            (void)build_rectangle(c);
            (void)build_stationary(c);
        }
        else {
            (void)build_schoenberg(c);
            const ChartMean chart(build_mean(c));
            if (!chart.periodic())
                throw ConfigError("mean.family", 0, "sphere mean is not 2 pi periodic in the longitude");
            if (!chart.pole_regular())
                throw ConfigError("mean.family", 0, "sphere mean is not single valued at the poles");
        }
        (void)build_mean(c);
    }
    catch (const ConfigError& e) {
        const std::string section = e.field().substr(0, e.field().find('.'));
        const std::string key = section == "noise" || section == "mean" ? section + ".family" : e.field();
        const int line = entries.line_of(e.field()) ? entries.line_of(e.field()) : entries.line_of(key);
        throw ConfigError(e.field(), line, e.message());
    }
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

namespace {

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

std::string join_rows(const std::vector<std::vector<double>>& rows)
{
    std::string s;
    for (std::size_t i = 0; i < rows.size(); ++i)
        s += (i ? "; " : "") + join(rows[i]);
    return s;
}

}  // namespace

std::string serialize_config(const RunConfig& c)
{
    std::ostringstream out;
    if (c.domain == DomainKind::Rectangle)
        out << "domain = rectangle\ndomain.lo = " << join(c.lo) << "\ndomain.hi = " << join(c.hi) << '\n';
    else
        out << "domain = sphere\ndomain.dim = " << c.sphere_dim << '\n';
    out << "levels = " << join(c.levels) << '\n';

    out << "\n[noise]\nfamily = " << c.noise.family << '\n';
    if (c.noise.family == "squared_exponential")
        out << "length_scale = " << fmt(c.noise.length_scale) << '\n';
    if (c.noise.family == "cosine_mixture")
        out << "frequencies = " << join_rows(c.noise.frequencies) << "\nweights = " << join(c.noise.weights) << '\n';
    if (!c.noise.coeffs.empty())
        out << "coeffs = " << join(c.noise.coeffs) << '\n';
    if (c.noise.ratio)
        out << "ratio = " << fmt(*c.noise.ratio) << '\n';

    out << "\n[mean]\nfamily = " << c.mean.family << "\nc = " << fmt(c.mean.c) << '\n';
    if (c.mean.family == "linear")
        out << "gradient = " << join(c.mean.gradient) << '\n';
    if (c.mean.family == "quadratic_bump")
        out << "center = " << join(c.mean.center) << "\ncurvature = " << join_rows(c.mean.curvature) << '\n';
    if (c.mean.family == "cosine_product")
        out << "amplitudes = " << join(c.mean.amplitudes) << "\nfrequencies = " << join_rows(c.mean.frequencies)
            << '\n';

    out << "\n[quadrature]\nnodes_per_axis = " << c.quadrature.nodes_per_axis
        << "\nnodes_x = " << c.quadrature.nodes_x << "\northant_points = " << c.quadrature.orthant_points
        << "\ncolatitude_nodes = " << c.sphere_quadrature.colatitude_nodes
        << "\nlongitude_nodes = " << c.sphere_quadrature.longitude_nodes
        << "\nlongitude_offset = " << fmt(c.sphere_quadrature.longitude_offset) << '\n';

    out << "\n[formula]\nbracket = " << (c.bracket == BracketArgument::Residual ? "residual" : "printed") << '\n';
    if (c.domain == DomainKind::Sphere)
        out << "sphere_derivatives = " << (c.sphere_derivatives == SphereDerivatives::Frame ? "frame" : "chart") << '\n';

    if (c.mc) {
        out << "\n[mc]\nsamples = " << c.mc->samples << "\nseed = " << c.mc->seed << "\nblock = " << c.mc->block
            << "\nallowance = " << fmt(c.mc->allowance) << '\n';
        if (c.domain == DomainKind::Rectangle) {
            out << "grid = ";
            for (std::size_t i = 0; i < c.mc->grid.size(); ++i)
                out << (i ? ", " : "") << c.mc->grid[i];
            out << '\n';
        }
        else {
            out << "icosphere_level = " << c.mc->icosphere_level << '\n';
        }
    }

    out << "\n[verify]\nmatrix_samples = " << c.matrix_samples << '\n';
    if (!c.output_path.empty() || !c.mc_csv.empty()) {
        out << "\n[output]\n";
        if (!c.output_path.empty())
            out << "path = " << c.output_path << '\n';
        if (!c.mc_csv.empty())
            out << "mc_csv = " << c.mc_csv << '\n';
    }
    return out.str();
}

Rectangle build_rectangle(const RunConfig& c)
{
    if (c.domain != DomainKind::Rectangle)
        throw ConfigError("domain", 0, "not a rectangle");
    try {
        return Rectangle(to_eigen(c.lo), to_eigen(c.hi));
    }
    catch (const DomainError& e) {
        throw ConfigError("domain.lo", 0, e.what());
    }
}

StationaryModel build_stationary(const RunConfig& c)
{
    try {
        if (c.noise.family == "squared_exponential")
            return StationaryModel::squared_exponential(c.dim(), c.noise.length_scale);
        if (c.noise.family == "cosine_mixture") {
            for (const auto& f : c.noise.frequencies)
                if (static_cast<int>(f.size()) != c.dim())
                    throw ConfigError("noise.frequencies", 0, "each frequency needs one entry per axis");
            return StationaryModel::cosine_mixture(to_eigen(c.noise.frequencies), c.noise.weights);
        }
    }
    catch (const ConfigError&) {
        throw;
    }
    catch (const Error& e) {
        throw ConfigError("noise.family", 0, e.what());
    }
    throw ConfigError("noise.family", 0, "not a stationary rectangle model");
}

SchoenbergModel build_schoenberg(const RunConfig& c)
{
    try {
        if (c.noise.family == "schoenberg")
            return c.noise.ratio ? SchoenbergModel::geometric(c.sphere_dim, *c.noise.ratio)
                                 : SchoenbergModel::from_coefficients(c.sphere_dim, c.noise.coeffs);
    }
    catch (const Error& e) {
        throw ConfigError(c.noise.ratio ? "noise.ratio" : "noise.coeffs", 0, e.what());
    }
    throw ConfigError("noise.family", 0, "not a sphere model");
}

MeanFunction build_mean(const RunConfig& c)
{
    const MeanSpec& m = c.mean;
    const int n = c.dim();
    auto require_dim = [&](const std::vector<double>& v, const char* key) {
        if (static_cast<int>(v.size()) != n)
            throw ConfigError(key, 0, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
    };
    try {
        if (m.family == "constant")
            return MeanFunction::constant(n, m.c);
        if (m.family == "linear") {
            require_dim(m.gradient, "mean.gradient");
            return MeanFunction::linear(m.c, to_eigen(m.gradient));
        }
        if (m.family == "quadratic_bump") {
            require_dim(m.center, "mean.center");
            if (static_cast<int>(m.curvature.size()) != n)
                throw ConfigError("mean.curvature", 0, "expected " + std::to_string(n) + " rows");
            Eigen::MatrixXd a(n, n);
            for (int i = 0; i < n; ++i) {
                require_dim(m.curvature[static_cast<std::size_t>(i)], "mean.curvature");
                for (int j = 0; j < n; ++j)
                    a(i, j) = m.curvature[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
            return MeanFunction::quadratic_bump(m.c, to_eigen(m.center), a);
        }
        if (m.family == "cosine_product") {
            for (const auto& f : m.frequencies)
                require_dim(f, "mean.frequencies");
            return MeanFunction::cosine_product(n, m.c, m.amplitudes, to_eigen(m.frequencies));
        }
    }
    catch (const ConfigError&) {
        throw;
    }
    catch (const Error& e) {
        throw ConfigError("mean.family", 0, e.what());
    }
    throw ConfigError("mean.family", 0, "unknown mean family '" + m.family + "'");
}

}  // namespace eec
