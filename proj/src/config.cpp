#include "ftm/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <utility>

#include "ftm/errors.hpp"

namespace ftm {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join17(const std::vector<double>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ", ";
        out += fmt17(vs[i]);
    }
    return out;
}

struct Raw {
    std::string value;
    int line;
};

// Raw key-value store from one parsing pass, addressed as "section.key".
using RawMap = std::map<std::string, Raw>;

const std::map<std::string, std::vector<std::string>>& known_keys() {
    static const std::map<std::string, std::vector<std::string>> k = {
        {"model", {"lambda", "eta", "omega0", "omega_c", "temperature", "beta"}},
        {"scenario",
         {"interaction", "component", "t_final", "n_steps", "rho11",
          "re_rho12", "im_rho12", "solver", "splitting_n", "weight_convention",
          "f"}},
        {"sweep", {"lambda", "eta", "omega0", "temperature"}},
        {"output", {"dir", "prefix", "basis"}},
        {"experiment",
         {"theta", "shots", "seed", "taus", "tau_min", "tau_max", "n_tau"}},
    };
    return k;
}

RawMap scan(const std::string& text) {
    RawMap raw;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(
            pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;

        if (t.front() == '[') {
            if (t.back() != ']')
                throw ParseError("unterminated section header", line_no);
            std::string name = trim(t.substr(1, t.size() - 2));
            if (known_keys().find(name) == known_keys().end())
                throw ParseError("unknown section [" + name + "]", line_no);
            section = name;
            continue;
        }

        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value' or a [section] header",
                             line_no);
        if (section.empty())
            throw ParseError("key before any [section] header", line_no);

        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        const auto& allowed = known_keys().at(section);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ParseError("unknown key '" + key + "' in [" + section + "]",
                             line_no);
        if (value.empty())
            throw ParseError("empty value for '" + key + "'", line_no);

        auto [it, inserted] = raw.emplace(section + "." + key,
                                          Raw{value, line_no});
        (void)it;
        if (!inserted)
            throw ParseError("duplicate key '" + key + "' in [" + section + "]",
                             line_no);
    }
    return raw;
}

const Raw* find(const RawMap& raw, const std::string& addr) {
    auto it = raw.find(addr);
    return it == raw.end() ? nullptr : &it->second;
}

double as_double(const Raw& r) {
    const char* s = r.value.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw ParseError("'" + r.value + "' is not a number", r.line);
    return v;
}

long long as_int(const Raw& r) {
    const char* s = r.value.c_str();
    char* end = nullptr;
    long long v = std::strtoll(s, &end, 10);
    if (end == s || *end != '\0')
        throw ParseError("'" + r.value + "' is not an integer", r.line);
    return v;
}

std::uint64_t as_uint64(const Raw& r) {
    if (!r.value.empty() && r.value[0] == '-')
        throw ParseError("'" + r.value + "' is not a nonnegative integer",
                         r.line);
    const char* s = r.value.c_str();
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end == s || *end != '\0')
        throw ParseError("'" + r.value + "' is not a nonnegative integer",
                         r.line);
    return v;
}

std::vector<double> as_list(const Raw& r) {
    std::vector<double> out;
    std::size_t pos = 0;
    const std::string& v = r.value;
    while (true) {
        std::size_t comma = v.find(',', pos);
        std::string item = trim(
            v.substr(pos, comma == std::string::npos ? std::string::npos
                                                     : comma - pos));
        if (item.empty())
            throw ParseError("empty element in list '" + v + "'", r.line);
        const char* s = item.c_str();
        char* end = nullptr;
        out.push_back(std::strtod(s, &end));
        if (end == s || *end != '\0')
            throw ParseError("'" + item + "' is not a number", r.line);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

// Enum values are matched case-insensitively; a wrong token is a domain
// problem (the key and line are fine), so it reports as ValidationError.
int as_choice(const Raw& r, const std::string& field,
              const std::vector<std::string>& tokens) {
    std::string v = lower(r.value);
    for (std::size_t i = 0; i < tokens.size(); ++i)
        if (v == tokens[i]) return static_cast<int>(i);
    std::string what = "must be one of:";
    for (const auto& t : tokens) what += " " + t;
    throw ValidationError(field, what);
}

void check_finite(double v, const char* field) {
    if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

} // namespace

std::size_t SweepAxes::product() const {
    std::size_t p = 1;
    for (const auto* axis : {&lambda, &eta, &omega0, &temperature})
        p *= std::max<std::size_t>(1, axis->size());
    return p;
}

bool SweepAxes::any() const {
    return !lambda.empty() || !eta.empty() || !omega0.empty() ||
           !temperature.empty();
}

std::vector<double> default_tau_grid() {
    std::vector<double> taus(50);
    for (int k = 0; k < 50; ++k) taus[k] = 0.1 + 0.9 * k / 49.0;
    return taus;
}

bool RunConfig::operator==(const RunConfig& o) const {
    return scenario == o.scenario && params == o.params && rho0 == o.rho0 &&
           t_final == o.t_final && n_steps == o.n_steps &&
           solver == o.solver && splitting_n == o.splitting_n &&
           convention == o.convention && f == o.f && sweep == o.sweep &&
           experiment == o.experiment && output == o.output;
}

void validate_config(const RunConfig& c) {
    if (!(c.params.lambda >= 0.0) || !std::isfinite(c.params.lambda))
        throw ValidationError("lambda", "must be nonnegative and finite");
    if (!(c.params.eta >= 0.0) || !std::isfinite(c.params.eta))
        throw ValidationError("eta", "must be nonnegative and finite");
    check_finite(c.params.omega0, "omega0");
    if (!(c.params.omega_c > 0.0) || !std::isfinite(c.params.omega_c))
        throw ValidationError("omega_c", "must be positive and finite");

    if (!(c.t_final > 0.0) || !std::isfinite(c.t_final))
        throw ValidationError("t_final", "must be positive and finite");
    if (c.n_steps < 4 || c.n_steps > 1000000)
        throw ValidationError("n_steps", "must lie in [4, 1000000]");
    if (c.splitting_n < 1 || c.splitting_n > 24)
        throw ValidationError("splitting_n", "must lie in [1, 24]");
    if (c.f && !(*c.f > 0.0 && *c.f < 1.0))
        throw ValidationError("f", "must lie in (0, 1)");

    if (c.rho0.basis != Basis::Z)
        throw ValidationError("rho0", "initial state must be given in the Z basis");
    try {
        make_density(c.rho0.rho11, c.rho0.rho12, Basis::Z);
    } catch (const Error& e) {
        throw ValidationError("rho0", e.what());
    }

    for (double v : c.sweep.lambda)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError("sweep.lambda", "entries must be nonnegative and finite");
    for (double v : c.sweep.eta)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError("sweep.eta", "entries must be nonnegative and finite");
    for (double v : c.sweep.omega0)
        if (!std::isfinite(v))
            throw ValidationError("sweep.omega0", "entries must be finite");
    for (double v : c.sweep.temperature)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError("sweep.temperature", "entries must be nonnegative and finite");
    if (c.sweep.product() > 10000)
        throw ValidationError("sweep", "cross product exceeds 10000 runs");

    check_finite(c.experiment.theta, "theta");
    if (c.experiment.shots < 1 || c.experiment.shots > 1000000000LL)
        throw ValidationError("shots", "must lie in [1, 1e9]");
    if (c.experiment.taus.empty())
        throw ValidationError("taus", "at least one tau is required");
    for (double v : c.experiment.taus)
        if (!(v > 0.0) || !std::isfinite(v))
            throw ValidationError("taus", "entries must be positive and finite");

    if (c.output.dir.empty())
        throw ValidationError("dir", "must be nonempty");
    if (c.output.prefix.empty())
        throw ValidationError("prefix", "must be nonempty");
    for (char ch : c.output.prefix) {
        bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
                  ch == '-' || ch == '.';
        if (!ok)
            throw ValidationError("prefix",
                                  "may contain only letters, digits, '_', '-', '.'");
    }
}

RunConfig parse_config(const std::string& text) {
    RawMap raw = scan(text);
    RunConfig c;

    if (const Raw* r = find(raw, "model.lambda")) c.params.lambda = as_double(*r);
    if (const Raw* r = find(raw, "model.eta")) c.params.eta = as_double(*r);
    if (const Raw* r = find(raw, "model.omega0")) c.params.omega0 = as_double(*r);
    if (const Raw* r = find(raw, "model.omega_c")) c.params.omega_c = as_double(*r);

    const Raw* temp = find(raw, "model.temperature");
    const Raw* beta = find(raw, "model.beta");
    if (temp && beta)
        throw ValidationError("temperature", "give temperature or beta, not both");
    if (temp) {
        double v = as_double(*temp);
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError("temperature", "must be nonnegative and finite");
        c.params.beta = InverseTemperature::from_temperature(v);
    } else if (beta) {
        double v = as_double(*beta);
        if (!(v > 0.0) || !std::isfinite(v))
            throw ValidationError("beta", "must be positive and finite");
        c.params.beta = InverseTemperature::finite(v);
    }

    const Raw* inter = find(raw, "scenario.interaction");
    if (!inter) throw ValidationError("interaction", "key is required");
    c.scenario.bath = as_choice(*inter, "interaction", {"pd", "ad"}) == 0
                          ? BathCoupling::Dephasing
                          : BathCoupling::Dissipative;
    const Raw* comp = find(raw, "scenario.component");
    if (!comp) throw ValidationError("component", "key is required");
    c.scenario.axis = as_choice(*comp, "component", {"x", "z"}) == 0
                          ? MeasurementAxis::X
                          : MeasurementAxis::Z;

    if (const Raw* r = find(raw, "scenario.t_final")) c.t_final = as_double(*r);
    if (const Raw* r = find(raw, "scenario.n_steps")) {
        long long v = as_int(*r);
        if (v < 4 || v > 1000000)
            throw ValidationError("n_steps", "must lie in [4, 1000000]");
        c.n_steps = static_cast<int>(v);
    }
    if (const Raw* r = find(raw, "scenario.solver")) {
        int v = as_choice(*r, "solver", {"hybrid", "splitting", "both"});
        c.solver = v == 0 ? SolverChoice::Hybrid
                          : (v == 1 ? SolverChoice::Splitting : SolverChoice::Both);
    }
    if (const Raw* r = find(raw, "scenario.splitting_n")) {
        long long v = as_int(*r);
        if (v < 1 || v > 24)
            throw ValidationError("splitting_n", "must lie in [1, 24]");
        c.splitting_n = static_cast<int>(v);
    }
    if (const Raw* r = find(raw, "scenario.weight_convention")) {
        int v = as_choice(*r, "weight_convention", {"step_interval", "total_time"});
        c.convention = v == 0 ? WeightConvention::StepInterval
                              : WeightConvention::TotalTime;
    }
    if (const Raw* r = find(raw, "scenario.f")) c.f = as_double(*r);

    // Initial state: dissipative scenarios start in the excited population,
    // dephasing ones in the even superposition, unless keys override.
    bool pd = c.scenario.bath == BathCoupling::Dephasing;
    double r11 = pd ? 0.5 : 1.0;
    double re12 = pd ? 0.5 : 0.0;
    double im12 = 0.0;
    if (const Raw* r = find(raw, "scenario.rho11")) r11 = as_double(*r);
    if (const Raw* r = find(raw, "scenario.re_rho12")) re12 = as_double(*r);
    if (const Raw* r = find(raw, "scenario.im_rho12")) im12 = as_double(*r);
    c.rho0.rho11 = r11;
    c.rho0.rho12 = cplx(re12, im12);
    c.rho0.basis = Basis::Z;

    if (const Raw* r = find(raw, "sweep.lambda")) c.sweep.lambda = as_list(*r);
    if (const Raw* r = find(raw, "sweep.eta")) c.sweep.eta = as_list(*r);
    if (const Raw* r = find(raw, "sweep.omega0")) c.sweep.omega0 = as_list(*r);
    if (const Raw* r = find(raw, "sweep.temperature"))
        c.sweep.temperature = as_list(*r);

    if (const Raw* r = find(raw, "output.dir")) c.output.dir = r->value;
    if (const Raw* r = find(raw, "output.prefix")) c.output.prefix = r->value;
    if (const Raw* r = find(raw, "output.basis"))
        c.output.basis = as_choice(*r, "basis", {"z", "x"}) == 0 ? Basis::Z
                                                                 : Basis::X;

    if (const Raw* r = find(raw, "experiment.theta"))
        c.experiment.theta = as_double(*r);
    if (const Raw* r = find(raw, "experiment.shots")) {
        long long v = as_int(*r);
        if (v < 1) throw ValidationError("shots", "must be at least 1");
        c.experiment.shots = v;
    }
    if (const Raw* r = find(raw, "experiment.seed"))
        c.experiment.seed = as_uint64(*r);

    const Raw* taus = find(raw, "experiment.taus");
    const Raw* tmin = find(raw, "experiment.tau_min");
    const Raw* tmax = find(raw, "experiment.tau_max");
    const Raw* ntau = find(raw, "experiment.n_tau");
    if (taus && (tmin || tmax || ntau))
        throw ValidationError("taus", "give either taus or tau_min/tau_max/n_tau, not both");
    if (taus) {
        c.experiment.taus = as_list(*taus);
    } else if (tmin || tmax || ntau) {
        double lo = tmin ? as_double(*tmin) : 0.1;
        double hi = tmax ? as_double(*tmax) : 1.0;
        long long n = ntau ? as_int(*ntau) : 50;
        if (!(lo > 0.0) || !std::isfinite(lo))
            throw ValidationError("tau_min", "must be positive and finite");
        if (!(hi >= lo) || !std::isfinite(hi))
            throw ValidationError("tau_max", "must be finite and >= tau_min");
        if (n < 1 || n > 100000)
            throw ValidationError("n_tau", "must lie in [1, 100000]");
        c.experiment.taus.resize(static_cast<std::size_t>(n));
        for (long long k = 0; k < n; ++k)
            c.experiment.taus[static_cast<std::size_t>(k)] =
                n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) /
                                  static_cast<double>(n - 1);
    }
    // else: keep the default grid from ExperimentSetup.

    validate_config(c);
    return c;
}

std::string serialize_config(const RunConfig& c) {
    std::string out;
    out += "[model]\n";
    out += "lambda = " + fmt17(c.params.lambda) + "\n";
    out += "eta = " + fmt17(c.params.eta) + "\n";
    out += "omega0 = " + fmt17(c.params.omega0) + "\n";
    out += "omega_c = " + fmt17(c.params.omega_c) + "\n";
    if (c.params.beta.is_zero_temperature())
        out += "temperature = 0\n";
    else
        out += "beta = " + fmt17(c.params.beta.beta()) + "\n";

    out += "\n[scenario]\n";
    out += std::string("interaction = ") +
           (c.scenario.bath == BathCoupling::Dephasing ? "pd" : "ad") + "\n";
    out += std::string("component = ") +
           (c.scenario.axis == MeasurementAxis::X ? "x" : "z") + "\n";
    out += "t_final = " + fmt17(c.t_final) + "\n";
    out += "n_steps = " + std::to_string(c.n_steps) + "\n";
    out += "rho11 = " + fmt17(c.rho0.rho11) + "\n";
    out += "re_rho12 = " + fmt17(c.rho0.rho12.real()) + "\n";
    out += "im_rho12 = " + fmt17(c.rho0.rho12.imag()) + "\n";
    out += std::string("solver = ") +
           (c.solver == SolverChoice::Hybrid
                ? "hybrid"
                : (c.solver == SolverChoice::Splitting ? "splitting" : "both")) +
           "\n";
    out += "splitting_n = " + std::to_string(c.splitting_n) + "\n";
    out += std::string("weight_convention = ") +
           (c.convention == WeightConvention::StepInterval ? "step_interval"
                                                           : "total_time") +
           "\n";
    if (c.f) out += "f = " + fmt17(*c.f) + "\n";

    if (c.sweep.any()) {
        out += "\n[sweep]\n";
        if (!c.sweep.lambda.empty())
            out += "lambda = " + join17(c.sweep.lambda) + "\n";
        if (!c.sweep.eta.empty()) out += "eta = " + join17(c.sweep.eta) + "\n";
        if (!c.sweep.omega0.empty())
            out += "omega0 = " + join17(c.sweep.omega0) + "\n";
        if (!c.sweep.temperature.empty())
            out += "temperature = " + join17(c.sweep.temperature) + "\n";
    }

    out += "\n[output]\n";
    out += "dir = " + c.output.dir + "\n";
    out += "prefix = " + c.output.prefix + "\n";
    out += std::string("basis = ") + (c.output.basis == Basis::Z ? "z" : "x") +
           "\n";

    out += "\n[experiment]\n";
    out += "theta = " + fmt17(c.experiment.theta) + "\n";
    out += "shots = " + std::to_string(c.experiment.shots) + "\n";
    out += "seed = " + std::to_string(c.experiment.seed) + "\n";
    out += "taus = " + join17(c.experiment.taus) + "\n";
    return out;
}

std::vector<RunConfig> expand_sweep(const RunConfig& c) {
    validate_config(c);
    std::vector<RunConfig> runs;
    runs.reserve(c.sweep.product());

    const std::vector<double> one{0.0};
    const auto& ls = c.sweep.lambda.empty() ? one : c.sweep.lambda;
    const auto& es = c.sweep.eta.empty() ? one : c.sweep.eta;
    const auto& ws = c.sweep.omega0.empty() ? one : c.sweep.omega0;
    const auto& ts = c.sweep.temperature.empty() ? one : c.sweep.temperature;

    for (std::size_t il = 0; il < ls.size(); ++il)
        for (std::size_t ie = 0; ie < es.size(); ++ie)
            for (std::size_t iw = 0; iw < ws.size(); ++iw)
                for (std::size_t it = 0; it < ts.size(); ++it) {
                    RunConfig r = c;
                    r.sweep = SweepAxes{};
                    if (!c.sweep.lambda.empty()) r.params.lambda = ls[il];
                    if (!c.sweep.eta.empty()) r.params.eta = es[ie];
                    if (!c.sweep.omega0.empty()) r.params.omega0 = ws[iw];
                    if (!c.sweep.temperature.empty())
                        r.params.beta = InverseTemperature::from_temperature(ts[it]);
                    validate_config(r);
                    runs.push_back(std::move(r));
                }
    return runs;
}

} // namespace ftm
