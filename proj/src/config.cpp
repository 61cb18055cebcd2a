#include "cisim/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string_view>
#include <utility>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace cisim {

namespace pt = boost::property_tree;

namespace {

constexpr std::array<std::pair<RampShape, std::string_view>, 3> kRampNames{
    {{RampShape::linear, "linear"}, {RampShape::staggered, "staggered"}, {RampShape::constant, "constant"}}};
constexpr std::array<std::pair<AmplitudeRule, std::string_view>, 3> kRuleNames{
    {{AmplitudeRule::midpoint, "midpoint"}, {AmplitudeRule::left, "left"}, {AmplitudeRule::right, "right"}}};
constexpr std::array<std::pair<TrotterScheme, std::string_view>, 4> kSchemeNames{
    {{TrotterScheme::first_order_split, "first_order_split"},
     {TrotterScheme::strang, "strang"},
     {TrotterScheme::mode_split, "mode_split"},
     {TrotterScheme::exact_simultaneous, "exact_simultaneous"}}};
constexpr std::array<std::pair<CrossCoupling, std::string_view>, 2> kCrossNames{
    {{CrossCoupling::off, "off"}, {CrossCoupling::on, "on"}}};
constexpr std::array<std::pair<SurfaceUnits, std::string_view>, 2> kUnitNames{
    {{SurfaceUnits::khz, "khz"}, {SurfaceUnits::raw, "raw"}}};
constexpr std::array<std::pair<BerryPathKind, std::string_view>, 3> kPathNames{
    {{BerryPathKind::circle, "circle"}, {BerryPathKind::arc, "arc"}, {BerryPathKind::shifted_loop, "shifted_loop"}}};
constexpr std::array<std::pair<StudyKind, std::string_view>, 4> kStudyNames{
    {{StudyKind::adiabaticity, "adiabaticity"},
     {StudyKind::fidelity, "fidelity"},
     {StudyKind::trotter_convergence, "trotter_convergence"},
     {StudyKind::ci_vs_nonci, "ci_vs_nonci"}}};

template <typename E, std::size_t N>
struct EnumField {
    E& value;
    const std::array<std::pair<E, std::string_view>, N>& names;
};

template <typename E, std::size_t N>
EnumField<E, N> enum_field(E& v, const std::array<std::pair<E, std::string_view>, N>& names) {
    return {v, names};
}

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
    fail(ErrorCode::ConfigError, key + ": " + what);
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    T v{};
    const std::string s = boost::algorithm::trim_copy(text);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) config_error(key, "cannot parse '" + text + "'");
    return v;
}

// Reads fields out of a property tree.
class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    template <typename T>
    void field(const std::string& section, const std::string& key, T& value) {
        const std::string path = section + "." + key;
        seen_.insert(path);
        const auto node = tree_.get_optional<std::string>(pt::ptree::path_type(path, '.'));
        if (node) assign(path, *node, value);
    }

    void check_unknown() const {
        for (const auto& [section, body] : tree_) {
            if (body.empty() && !body.data().empty()) config_error(section, "key outside of any section");
            for (const auto& [key, unused] : body) {
                (void)unused;
                const std::string path = section + "." + key;
                if (!seen_.count(path)) config_error(path, "unknown setting");
            }
        }
    }

private:
    static void assign(const std::string& key, const std::string& text, double& v) {
        v = parse_number<double>(key, text);
        if (!std::isfinite(v)) config_error(key, "must be finite");
    }
    static void assign(const std::string& key, const std::string& text, int& v) { v = parse_number<int>(key, text); }
    static void assign(const std::string& key, const std::string& text, std::uint64_t& v) {
        v = parse_number<std::uint64_t>(key, text);
    }
    static void assign(const std::string&, const std::string& text, std::string& v) {
        v = boost::algorithm::trim_copy(text);
    }
    static void assign(const std::string& key, const std::string& text, bool& v) {
        const std::string s = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(text));
        if (s == "true" || s == "1" || s == "yes" || s == "on") v = true;
        else if (s == "false" || s == "0" || s == "no" || s == "off") v = false;
        else config_error(key, "expected a boolean, got '" + text + "'");
    }
    static void assign(const std::string& key, const std::string& text, std::vector<int>& v) {
        std::vector<std::string> parts;
        boost::algorithm::split(parts, text, boost::algorithm::is_any_of(","));
        v.clear();
        for (const auto& p : parts) v.push_back(parse_number<int>(key, p));
    }
    template <typename E, std::size_t N>
    static void assign(const std::string& key, const std::string& text, EnumField<E, N>& f) {
        const std::string s = boost::algorithm::trim_copy(text);
        for (const auto& [value, name] : f.names)
            if (s == name) {
                f.value = value;
                return;
            }
        config_error(key, "unknown value '" + s + "'");
    }

    const pt::ptree& tree_;
    std::set<std::string> seen_;
};

// Writes fields into a property tree.
class Writer {
public:
    template <typename T>
    void field(const std::string& section, const std::string& key, const T& value) {
        tree_.put(pt::ptree::path_type(section + "." + key, '.'), render(value));
    }
    const pt::ptree& tree() const { return tree_; }

private:
    static std::string render(double v) { return format_double(v); }
    static std::string render(int v) { return std::to_string(v); }
    static std::string render(std::uint64_t v) { return std::to_string(v); }
    static std::string render(const std::string& v) { return v; }
    static std::string render(bool v) { return v ? "true" : "false"; }
    static std::string render(const std::vector<int>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
        return out;
    }
    template <typename E, std::size_t N>
    static std::string render(const EnumField<E, N>& f) {
        for (const auto& [value, name] : f.names)
            if (value == f.value) return std::string(name);
        return {};
    }

    pt::ptree tree_;
};

template <typename Visitor, typename Cfg>
void visit(Visitor& v, Cfg& c) {
    v.field("model", "nu_khz", c.model.nu_khz);
    v.field("model", "omega_khz", c.model.omega_khz);
    v.field("model", "delta_khz", c.model.delta_khz);
    v.field("model", "delta_z_khz", c.model.delta_z_khz);
    v.field("model", "delta_xy_khz", c.model.delta_xy_khz);
    v.field("model", "eta_omega_scale", c.model.eta_omega_scale);

    v.field("schedule", "tau_us", c.schedule.tau_us);
    v.field("schedule", "rounds", c.schedule.rounds);
    auto ramp = enum_field(c.schedule.ramp, kRampNames);
    v.field("schedule", "ramp", ramp);
    auto rule = enum_field(c.schedule.amplitude_rule, kRuleNames);
    v.field("schedule", "amplitude_rule", rule);
    auto scheme = enum_field(c.schedule.scheme, kSchemeNames);
    v.field("schedule", "scheme", scheme);
    v.field("schedule", "substeps", c.schedule.substeps);

    v.field("truncation", "n_max_x", c.truncation.n_max_x);
    v.field("truncation", "n_max_y", c.truncation.n_max_y);
    v.field("truncation", "leak_threshold", c.truncation.leak_threshold);

    v.field("noise", "enabled", c.noise.enabled);
    auto cross = enum_field(c.noise.cross_coupling, kCrossNames);
    v.field("noise", "cross_coupling", cross);
    v.field("noise", "steps", c.noise.steps);
    v.field("noise", "lower_x_per_s", c.noise.lower_x_per_s);
    v.field("noise", "raise_x_per_s", c.noise.raise_x_per_s);
    v.field("noise", "number_x_per_s", c.noise.number_x_per_s);
    v.field("noise", "lower_y_per_s", c.noise.lower_y_per_s);
    v.field("noise", "raise_y_per_s", c.noise.raise_y_per_s);
    v.field("noise", "number_y_per_s", c.noise.number_y_per_s);

    v.field("tomography", "k_max", c.tomography.k_max);
    v.field("tomography", "k_points", c.tomography.k_points);
    v.field("tomography", "rotation_deg", c.tomography.rotation_deg);
    v.field("tomography", "output_rotation_deg", c.tomography.output_rotation_deg);
    v.field("tomography", "shots", c.tomography.shots);
    v.field("tomography", "grid_half_width", c.tomography.grid_half_width);
    v.field("tomography", "grid_resolution", c.tomography.grid_resolution);
    v.field("tomography", "cut_angle_deg", c.tomography.cut_angle_deg);
    v.field("tomography", "cut_points", c.tomography.cut_points);
    v.field("tomography", "ratio_angles", c.tomography.ratio_angles);

    auto units = enum_field(c.surface.units, kUnitNames);
    v.field("surface", "units", units);
    v.field("surface", "half_width", c.surface.half_width);
    v.field("surface", "resolution", c.surface.resolution);

    auto path = enum_field(c.berry.path, kPathNames);
    v.field("berry", "path", path);
    v.field("berry", "center_x", c.berry.center_x);
    v.field("berry", "center_y", c.berry.center_y);
    v.field("berry", "radius", c.berry.radius);
    v.field("berry", "theta0_deg", c.berry.theta0_deg);
    v.field("berry", "theta1_deg", c.berry.theta1_deg);
    v.field("berry", "eps", c.berry.eps);
    v.field("berry", "segments", c.berry.segments);
    v.field("berry", "clockwise", c.berry.clockwise);

    auto kind = enum_field(c.study.kind, kStudyNames);
    v.field("study", "kind", kind);
    v.field("study", "t_points", c.study.t_points);
    v.field("study", "n_excited", c.study.n_excited);
    v.field("study", "reference_tau_us", c.study.reference_tau_us);
    v.field("study", "reference_substeps", c.study.reference_substeps);
    v.field("study", "rounds_list", c.study.rounds_list);

    v.field("output", "dir", c.output.dir);
    v.field("output", "pgm", c.output.pgm);

    v.field("run", "seed", c.run.seed);
    v.field("run", "samples", c.run.samples);
}

template <typename Fn>
void as_config_error(Fn&& fn) {
    try {
        fn();
    } catch (const SimError& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        fail(ErrorCode::ConfigError, e.what());
    }
}

}  // namespace

double khz_to_rad_per_us(double khz) { return 2.0 * std::numbers::pi * khz * 1e-3; }

ModelParams ExperimentConfig::model_params() const {
    ModelParams p;
    p.nu = khz_to_rad_per_us(model.nu_khz);
    p.omega = khz_to_rad_per_us(model.omega_khz);
    p.delta = khz_to_rad_per_us(model.delta_khz);
    p.delta_z = khz_to_rad_per_us(model.delta_z_khz);
    p.delta_xy = khz_to_rad_per_us(model.delta_xy_khz);
    p.eta_omega_scale = model.eta_omega_scale;
    return p;
}

RampSchedule ExperimentConfig::ramp_schedule() const {
    RampSchedule s;
    s.total_time = schedule.tau_us;
    s.rounds = schedule.rounds;
    s.shape = schedule.ramp;
    s.amplitude_rule = schedule.amplitude_rule;
    s.scheme = schedule.scheme;
    s.substeps = schedule.substeps;
    return s;
}

ModeSpace ExperimentConfig::mode_space() const { return {truncation.n_max_x, truncation.n_max_y}; }

LindbladSpec ExperimentConfig::lindblad_spec() const {
    LindbladSpec spec;
    spec.cross_coupling = noise.cross_coupling;
    spec.steps = noise.steps;
    const std::array<std::pair<Collapse, double>, 6> rates{{{Collapse::lower_x, noise.lower_x_per_s},
                                                            {Collapse::raise_x, noise.raise_x_per_s},
                                                            {Collapse::number_x, noise.number_x_per_s},
                                                            {Collapse::lower_y, noise.lower_y_per_s},
                                                            {Collapse::raise_y, noise.raise_y_per_s},
                                                            {Collapse::number_y, noise.number_y_per_s}}};
    for (const auto& [op, per_s] : rates)
        if (per_s != 0.0) spec.channels.push_back({op, per_s * 1e-6});
    return spec;
}

KGrid ExperimentConfig::k_grid() const {
    return {tomography.k_max, tomography.k_points, tomography.rotation_deg * std::numbers::pi / 180.0};
}

SpatialGridSpec ExperimentConfig::grid_spec() const {
    return {tomography.grid_half_width, tomography.grid_resolution, 0.0};
}

SpatialGridSpec ExperimentConfig::output_spec() const {
    return {tomography.grid_half_width, tomography.grid_resolution, tomography.output_rotation_deg * std::numbers::pi / 180.0};
}

EvolutionOptions ExperimentConfig::evolution_options() const {
    EvolutionOptions o;
    o.samples = run.samples;
    o.leak_threshold = truncation.leak_threshold;
    return o;
}

void ExperimentConfig::validate() const {
    as_config_error([&] {
        model_params().validate();
        ramp_schedule().validate();
        require(truncation.n_max_x >= 2 && truncation.n_max_y >= 2, ErrorCode::ConfigError,
                "truncation: n_max must be at least 2");
        require(truncation.leak_threshold > 0.0, ErrorCode::ConfigError, "truncation.leak_threshold must be positive");
        lindblad_spec().validate();
        k_grid().validate();
        grid_spec().validate();
        require(tomography.shots >= 0, ErrorCode::ConfigError, "tomography.shots must be >= 0");
        require(tomography.cut_points >= 2 && tomography.ratio_angles >= 2, ErrorCode::ConfigError,
                "tomography: cut_points and ratio_angles must be >= 2");
        require(surface.half_width > 0.0 && surface.resolution >= 2, ErrorCode::ConfigError, "surface grid");
        require(berry.segments >= 2 && berry.radius > 0.0, ErrorCode::ConfigError, "berry path");
        require(study.t_points >= 1 && study.n_excited >= 0 && study.reference_tau_us > 0.0 &&
                    study.reference_substeps >= 1 && !study.rounds_list.empty(),
                ErrorCode::ConfigError, "study settings");
        for (int n : study.rounds_list) require(n >= 1, ErrorCode::ConfigError, "study.rounds_list entries must be >= 1");
        require(!output.dir.empty(), ErrorCode::ConfigError, "output.dir must not be empty");
        require(run.samples >= 0, ErrorCode::ConfigError, "run.samples must be >= 0");
    });
}

ExperimentConfig parse_config_string(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        fail(ErrorCode::ConfigError, std::string("malformed config: ") + e.what());
    }
    ExperimentConfig cfg;
    Reader reader(tree);
    visit(reader, cfg);
    reader.check_unknown();
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ConfigError, "cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_string(ss.str());
}

std::string emit_config(const ExperimentConfig& cfg) {
    Writer writer;
    ExperimentConfig copy = cfg;
    visit(writer, copy);
    std::ostringstream out;
    pt::write_ini(out, writer.tree());
    return out.str();
}

}  // namespace cisim
