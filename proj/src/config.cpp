#include "memdiff/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "memdiff/rng.hpp"

namespace memdiff {

const char* const kVersion = "1.0.0";

namespace {

struct Value;
using List = std::vector<Value>;
struct Value {
    std::variant<double, std::string, List> v;
    bool is_number() const { return std::holds_alternative<double>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_list() const { return std::holds_alternative<List>(v); }
};

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

Value parse_value(const std::string& text, const std::string& key);

List parse_list(const std::string& text, const std::string& key) {
    List out;
    std::size_t i = 1;  // past '['
    const std::size_t end = text.size();
    while (i < end) {
        while (i < end && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
            ++i;
        if (i >= end || text[i] == ']') break;
        if (text[i] == '[') {
            int depth = 1;
            std::size_t j = i + 1;
            while (j < end && depth > 0) {
                if (text[j] == '[') ++depth;
                if (text[j] == ']') --depth;
                ++j;
            }
            if (depth != 0) throw ConfigError(key + ": unbalanced brackets");
            out.push_back(parse_value(text.substr(i, j - i), key));
            i = j;
        } else {
            std::size_t j = i;
            int depth = 0;
            while (j < end && !(depth == 0 && (text[j] == ',' || text[j] == ']'))) {
                if (text[j] == '[') ++depth;
                if (text[j] == ']') --depth;
                ++j;
            }
            out.push_back(parse_value(trim(text.substr(i, j - i)), key));
            i = j;
        }
    }
    return out;
}

Value parse_value(const std::string& raw, const std::string& key) {
    const std::string text = trim(raw);
    if (text.empty()) throw ConfigError(key + ": empty value");
    if (text.front() == '[') {
        if (text.back() != ']') throw ConfigError(key + ": unterminated list");
        return Value{parse_list(text, key)};
    }
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"')
        return Value{text.substr(1, text.size() - 2)};
    char* endp = nullptr;
    const double d = std::strtod(text.c_str(), &endp);
    if (endp == text.c_str() + text.size()) return Value{d};
    return Value{text};
}

using KeyMap = std::map<std::string, Value>;

KeyMap parse_keys(const std::string& text) {
    KeyMap map;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        map[key] = parse_value(line.substr(eq + 1), key);
    }
    return map;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "domain.dims", "domain.lengths",
        "basis.modes", "basis.collocation",
        "kernel.terms", "kernel.tail_tol", "kernel.s_points", "kernel.grid", "kernel.grid_ratio",
        "nonlinearity.coeffs",
        "forcing.modes",
        "time.dt", "time.t_end", "time.record_every",
        "seed",
        "init.u0", "init.u0_modes", "init.scale", "init.history", "init.trajectory_file",
        "diagnostics.cutoffs",
        "absorb.members", "absorb.m1", "absorb.m2",
        "tail.cutoffs", "tail.epsilon",
        "depend.scales", "depend.c_h",
        "oracle.dts",
        "gronwall.draws",
    };
    return keys;
}

class Reader {
  public:
    explicit Reader(KeyMap map) : map_(std::move(map)) {
        for (const auto& [key, value] : map_) {
            (void)value;
            if (!known_keys().count(key)) throw ConfigError("unknown config key: " + key);
        }
    }

    bool has(const std::string& key) const { return map_.count(key) > 0; }

    double number(const std::string& key, double fallback) const {
        auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        if (!it->second.is_number()) throw ConfigError(key + ": expected a number");
        return std::get<double>(it->second.v);
    }

    long integer(const std::string& key, long fallback) const {
        const double d = number(key, static_cast<double>(fallback));
        const long v = static_cast<long>(std::llround(d));
        if (std::abs(d - static_cast<double>(v)) > 1e-9)
            throw ConfigError(key + ": expected an integer");
        return v;
    }

    std::string word(const std::string& key, const std::string& fallback) const {
        auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        if (!it->second.is_string()) throw ConfigError(key + ": expected a word");
        return std::get<std::string>(it->second.v);
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const {
        auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        if (!it->second.is_list()) throw ConfigError(key + ": expected a list");
        std::vector<double> out;
        for (const auto& e : std::get<List>(it->second.v)) {
            if (!e.is_number()) throw ConfigError(key + ": expected a list of numbers");
            out.push_back(std::get<double>(e.v));
        }
        return out;
    }

    std::vector<std::vector<double>> number_rows(const std::string& key) const {
        std::vector<std::vector<double>> out;
        auto it = map_.find(key);
        if (it == map_.end()) return out;
        if (!it->second.is_list()) throw ConfigError(key + ": expected a list of lists");
        for (const auto& e : std::get<List>(it->second.v)) {
            if (!e.is_list()) throw ConfigError(key + ": expected a list of lists");
            std::vector<double> row;
            for (const auto& x : std::get<List>(e.v)) {
                if (!x.is_number()) throw ConfigError(key + ": expected numeric entries");
                row.push_back(std::get<double>(x.v));
            }
            out.push_back(std::move(row));
        }
        return out;
    }

  private:
    KeyMap map_;
};

std::vector<int> to_ints(const std::vector<double>& v, const std::string& key) {
    std::vector<int> out;
    for (double d : v) {
        const int i = static_cast<int>(std::llround(d));
        if (std::abs(d - i) > 1e-9) throw ConfigError(key + ": expected integers");
        out.push_back(i);
    }
    return out;
}

ModeIndex mode_index_from_row(const std::vector<double>& row, int dims, const std::string& key) {
    if (row.size() != static_cast<std::size_t>(dims) + 1)
        throw ConfigError(key + ": each entry needs " + std::to_string(dims) +
                          " wavenumbers followed by a value");
    ModeIndex idx;
    for (int d = 0; d < dims; ++d) {
        const double kd = row[static_cast<std::size_t>(d)];
        idx.k[static_cast<std::size_t>(d)] = static_cast<int>(std::llround(kd));
        if (std::abs(kd - idx.k[static_cast<std::size_t>(d)]) > 1e-9)
            throw ConfigError(key + ": wavenumbers must be integers");
    }
    return idx;
}

std::size_t rank_of_mode(const ModeBasis& basis, const ModeIndex& idx, const std::string& key) {
    for (std::size_t r = 0; r < basis.size(); ++r) {
        bool same = true;
        for (int d = 0; d < basis.domain.dims; ++d)
            same = same && basis.modes[r].k[static_cast<std::size_t>(d)] ==
                               idx.k[static_cast<std::size_t>(d)];
        if (same) return r;
    }
    throw ConfigError(key + ": mode index outside the retained basis");
}

}  // namespace

FileConfig parse_config_text(const std::string& text) {
    Reader r{parse_keys(text)};
    FileConfig cfg;

    const int dims = static_cast<int>(r.integer("domain.dims", 1));
    const std::vector<double> default_lengths(static_cast<std::size_t>(std::max(dims, 1)),
                                              3.14159265358979323846);
    const auto lengths = r.numbers("domain.lengths", default_lengths);
    const BoxDomain box = make_box(dims, lengths);

    const auto modes = to_ints(
        r.numbers("basis.modes", std::vector<double>(static_cast<std::size_t>(dims), 32.0)),
        "basis.modes");
    std::vector<int> collocation;
    if (r.has("basis.collocation"))
        collocation = to_ints(r.numbers("basis.collocation", {}), "basis.collocation");
    cfg.sim.basis = make_basis(box, modes, collocation);

    std::vector<KernelTerm> terms;
    auto term_rows = r.number_rows("kernel.terms");
    if (term_rows.empty()) term_rows = {{1.0, 1.0}};
    for (const auto& row : term_rows) {
        if (row.size() != 2) throw ConfigError("kernel.terms: each term is [amplitude, rate]");
        terms.push_back(KernelTerm{row[0], row[1]});
    }
    const std::string grid_word = r.word("kernel.grid", "uniform");
    SGrid grid;
    if (grid_word == "uniform") grid = SGrid::Uniform;
    else if (grid_word == "geometric") grid = SGrid::Geometric;
    else throw ConfigError("kernel.grid: expected uniform or geometric");
    cfg.sim.kernel = make_kernel(terms, r.number("kernel.tail_tol", 1e-8),
                                 static_cast<std::size_t>(r.integer("kernel.s_points", 512)), grid,
                                 r.number("kernel.grid_ratio", 1.02));

    const auto coeffs = r.numbers("nonlinearity.coeffs", {0.0, 0.0, -1.0, 0.0});
    cfg.sim.nonlinearity = validate_nonlinearity(coeffs, cfg.sim.basis.lambda1);

    cfg.sim.forcing.assign(cfg.sim.basis.size(), 0.0);
    for (const auto& row : r.number_rows("forcing.modes")) {
        const ModeIndex idx = mode_index_from_row(row, dims, "forcing.modes");
        cfg.sim.forcing[rank_of_mode(cfg.sim.basis, idx, "forcing.modes")] = row.back();
    }

    cfg.sim.dt = r.number("time.dt", 1e-3);
    if (!(cfg.sim.dt > 0.0)) throw ConfigError("time.dt: must be positive");
    cfg.sim.t_end = r.number("time.t_end", 1.0);
    if (!(cfg.sim.t_end >= 0.0)) throw ConfigError("time.t_end: must be nonnegative");
    cfg.sim.record_every = r.integer("time.record_every", 10);
    if (cfg.sim.record_every < 1) throw ConfigError("time.record_every: must be >= 1");
    cfg.sim.seed = static_cast<std::uint64_t>(r.integer("seed", 1));

    for (double c : r.numbers("diagnostics.cutoffs", {})) {
        const long v = static_cast<long>(std::llround(c));
        if (v < 0 || static_cast<std::size_t>(v) > cfg.sim.basis.size())
            throw ConfigError("diagnostics.cutoffs: cutoff outside basis");
        cfg.sim.tail_cutoffs.push_back(static_cast<std::size_t>(v));
    }

    const std::string u0_word = r.word("init.u0", "random");
    if (u0_word == "random") cfg.init.u0 = InitSpec::U0::Random;
    else if (u0_word == "modes") cfg.init.u0 = InitSpec::U0::Modes;
    else throw ConfigError("init.u0: expected random or modes");
    for (const auto& row : r.number_rows("init.u0_modes")) {
        const ModeIndex idx = mode_index_from_row(row, dims, "init.u0_modes");
        rank_of_mode(cfg.sim.basis, idx, "init.u0_modes");
        cfg.init.u0_modes.emplace_back(idx, row.back());
    }
    cfg.init.scale = r.number("init.scale", 1.0);
    const std::string hist_word = r.word("init.history", "constant_past");
    if (hist_word == "constant_past") cfg.init.history = InitSpec::HistoryKind::ConstantPast;
    else if (hist_word == "zero") cfg.init.history = InitSpec::HistoryKind::Zero;
    else if (hist_word == "trajectory_file") cfg.init.history = InitSpec::HistoryKind::TrajectoryFile;
    else throw ConfigError("init.history: expected constant_past, zero or trajectory_file");
    cfg.init.trajectory_file = r.word("init.trajectory_file", "");
    if (cfg.init.history == InitSpec::HistoryKind::TrajectoryFile && cfg.init.trajectory_file.empty())
        throw ConfigError("init.trajectory_file: required when init.history = trajectory_file");

    cfg.experiment.absorb_members = static_cast<int>(r.integer("absorb.members", 10));
    cfg.experiment.absorb_m1 = r.number("absorb.m1", 100.0);
    cfg.experiment.m2 = r.number("absorb.m2", 1.0);
    cfg.experiment.tail_cutoffs.clear();
    for (double c : r.numbers("tail.cutoffs", {4.0, 8.0, 16.0, 32.0})) {
        const long v = static_cast<long>(std::llround(c));
        if (v < 0) throw ConfigError("tail.cutoffs: cutoffs must be nonnegative");
        cfg.experiment.tail_cutoffs.push_back(static_cast<std::size_t>(v));
    }
    cfg.experiment.tail_epsilon = r.number("tail.epsilon", 0.1);
    cfg.experiment.depend_scales = r.numbers("depend.scales", {1e-4, 1e-6, 1e-8});
    cfg.experiment.depend_ch = r.number("depend.c_h", -1.0);
    cfg.experiment.oracle_dts =
        r.numbers("oracle.dts", {0.512, 0.256, 0.128, 0.064, 0.032, 0.016, 0.008});
    cfg.experiment.gronwall_draws = static_cast<int>(r.integer("gronwall.draws", 100));
    return cfg;
}

FileConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt(v[i]);
    }
    return out + "]";
}

}  // namespace

std::string render_manifest(const FileConfig& cfg) {
    const SimConfig& sim = cfg.sim;
    std::ostringstream out;
    out << "# run manifest (artifact version " << kVersion << "); re-running from this file\n";
    out << "# reproduces the outputs byte-for-byte.\n";
    out << "domain.dims = " << sim.basis.domain.dims << "\n";
    std::vector<double> lengths(sim.basis.domain.lengths.begin(),
                                sim.basis.domain.lengths.begin() + sim.basis.domain.dims);
    out << "domain.lengths = " << fmt_list(lengths) << "\n";
    std::vector<double> modes, colloc;
    for (int d = 0; d < sim.basis.domain.dims; ++d) {
        modes.push_back(sim.basis.modes_per_dim[static_cast<std::size_t>(d)]);
        colloc.push_back(sim.basis.collocation_per_dim[static_cast<std::size_t>(d)]);
    }
    out << "basis.modes = " << fmt_list(modes) << "\n";
    out << "basis.collocation = " << fmt_list(colloc) << "\n";
    out << "kernel.terms = [";
    for (std::size_t i = 0; i < sim.kernel.terms.size(); ++i) {
        if (i) out << ", ";
        out << "[" << fmt(sim.kernel.terms[i].amplitude) << ", " << fmt(sim.kernel.terms[i].rate)
            << "]";
    }
    out << "]\n";
    out << "kernel.tail_tol = " << fmt(sim.kernel.tail_tol) << "\n";
    out << "kernel.s_points = " << sim.kernel.points() << "\n";
    out << "kernel.grid = "
        << (sim.kernel.grid_kind == SGrid::Geometric ? "geometric" : "uniform") << "\n";
    if (sim.kernel.grid_kind == SGrid::Geometric)
        out << "kernel.grid_ratio = " << fmt(sim.kernel.grid_ratio) << "\n";
    out << "nonlinearity.coeffs = "
        << fmt_list({sim.nonlinearity.coeffs[0], sim.nonlinearity.coeffs[1],
                     sim.nonlinearity.coeffs[2], sim.nonlinearity.coeffs[3]})
        << "\n";
    out << "forcing.modes = [";
    bool first = true;
    for (std::size_t k = 0; k < sim.forcing.size(); ++k) {
        if (sim.forcing[k] == 0.0) continue;
        if (!first) out << ", ";
        first = false;
        out << "[";
        for (int d = 0; d < sim.basis.domain.dims; ++d)
            out << sim.basis.modes[k].k[static_cast<std::size_t>(d)] << ", ";
        out << fmt(sim.forcing[k]) << "]";
    }
    out << "]\n";
    out << "time.dt = " << fmt(sim.dt) << "\n";
    out << "time.t_end = " << fmt(sim.t_end) << "\n";
    out << "time.record_every = " << sim.record_every << "\n";
    out << "seed = " << sim.seed << "\n";
    out << "init.u0 = " << (cfg.init.u0 == InitSpec::U0::Random ? "random" : "modes") << "\n";
    if (!cfg.init.u0_modes.empty()) {
        out << "init.u0_modes = [";
        for (std::size_t i = 0; i < cfg.init.u0_modes.size(); ++i) {
            if (i) out << ", ";
            out << "[";
            for (int d = 0; d < sim.basis.domain.dims; ++d)
                out << cfg.init.u0_modes[i].first.k[static_cast<std::size_t>(d)] << ", ";
            out << fmt(cfg.init.u0_modes[i].second) << "]";
        }
        out << "]\n";
    }
    out << "init.scale = " << fmt(cfg.init.scale) << "\n";
    out << "init.history = "
        << (cfg.init.history == InitSpec::HistoryKind::ConstantPast
                ? "constant_past"
                : cfg.init.history == InitSpec::HistoryKind::Zero ? "zero" : "trajectory_file")
        << "\n";
    if (!cfg.init.trajectory_file.empty())
        out << "init.trajectory_file = " << cfg.init.trajectory_file << "\n";
    if (!sim.tail_cutoffs.empty()) {
        std::vector<double> cuts(sim.tail_cutoffs.begin(), sim.tail_cutoffs.end());
        out << "diagnostics.cutoffs = " << fmt_list(cuts) << "\n";
    }
    out << "absorb.members = " << cfg.experiment.absorb_members << "\n";
    out << "absorb.m1 = " << fmt(cfg.experiment.absorb_m1) << "\n";
    out << "absorb.m2 = " << fmt(cfg.experiment.m2) << "\n";
    std::vector<double> tcuts(cfg.experiment.tail_cutoffs.begin(),
                              cfg.experiment.tail_cutoffs.end());
    out << "tail.cutoffs = " << fmt_list(tcuts) << "\n";
    out << "tail.epsilon = " << fmt(cfg.experiment.tail_epsilon) << "\n";
    out << "depend.scales = " << fmt_list(cfg.experiment.depend_scales) << "\n";
    out << "depend.c_h = " << fmt(cfg.experiment.depend_ch) << "\n";
    out << "oracle.dts = " << fmt_list(cfg.experiment.oracle_dts) << "\n";
    out << "gronwall.draws = " << cfg.experiment.gronwall_draws << "\n";

    const AbsorbingEstimate est =
        absorbing_estimate(sim, cfg.experiment.absorb_m1, cfg.experiment.m2);
    out << "# derived: lambda1 = " << fmt(sim.basis.lambda1) << "\n";
    out << "# derived: nu = " << fmt(sim.nonlinearity.nu) << "\n";
    out << "# derived: c1 = " << fmt(sim.nonlinearity.c1) << "\n";
    out << "# derived: beta = " << fmt(sim.nonlinearity.beta) << "\n";
    out << "# derived: gamma = " << fmt(sim.kernel.gamma) << "\n";
    out << "# derived: s_max = " << fmt(sim.kernel.s_max) << "\n";
    out << "# derived: alpha1 = " << fmt(est.alpha1) << "\n";
    out << "# derived: beta2 = " << fmt(est.beta2) << "\n";
    out << "# derived: sigma = " << fmt(est.sigma) << "\n";
    out << "# derived: rho1_sq = " << fmt(est.rho1_sq) << "\n";
    out << "# derived: rho2_sq = " << fmt(est.rho2_sq) << "\n";
    return out.str();
}

void write_manifest(const FileConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write manifest: " + path);
    out << render_manifest(cfg);
}

State random_band_state(const SimConfig& sim, std::uint64_t member, double scale) {
    Rng rng = Rng::member_stream(sim.seed, member);
    State u(sim.basis.size());
    const std::size_t band = (sim.basis.size() + 2) / 3;  // lowest third of modes
    for (std::size_t k = 0; k < band; ++k) u[k] = scale * rng.next_symmetric();
    return u;
}

std::vector<std::pair<double, State>> read_trajectory_file(const std::string& path,
                                                           std::size_t n_modes) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trajectory file: " + path);
    std::vector<std::pair<double, State>> samples;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        double t;
        if (!(row >> t)) throw ConfigError("trajectory file: malformed time in line");
        State u(n_modes);
        for (std::size_t k = 0; k < n_modes; ++k)
            if (!(row >> u[k]))
                throw ConfigError("trajectory file: expected " + std::to_string(n_modes) +
                                  " coefficients per line");
        samples.emplace_back(t, std::move(u));
    }
    return samples;
}

std::pair<State, History> initial_data(const FileConfig& cfg) {
    const SimConfig& sim = cfg.sim;
    State u0(sim.basis.size());
    if (cfg.init.u0 == InitSpec::U0::Random) {
        u0 = random_band_state(sim, 0, cfg.init.scale);
    } else {
        for (const auto& [idx, value] : cfg.init.u0_modes) {
            for (std::size_t r = 0; r < sim.basis.size(); ++r) {
                bool same = true;
                for (int d = 0; d < sim.basis.domain.dims; ++d)
                    same = same && sim.basis.modes[r].k[static_cast<std::size_t>(d)] ==
                                       idx.k[static_cast<std::size_t>(d)];
                if (same) {
                    u0[r] = value;
                    break;
                }
            }
        }
    }
    History h0;
    switch (cfg.init.history) {
        case InitSpec::HistoryKind::ConstantPast:
            h0 = history_from_constant_past(u0, sim.kernel);
            break;
        case InitSpec::HistoryKind::Zero:
            h0 = History(sim.basis.size(), sim.kernel.points());
            break;
        case InitSpec::HistoryKind::TrajectoryFile:
            h0 = history_from_past_trajectory(
                read_trajectory_file(cfg.init.trajectory_file, sim.basis.size()), sim.kernel);
            break;
    }
    return {std::move(u0), std::move(h0)};
}

}  // namespace memdiff
