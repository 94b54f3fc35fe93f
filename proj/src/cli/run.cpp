#include "kdyn/cli/run.hpp"

#include <cmath>
#include <sstream>

#include "kdyn/degrees.hpp"
#include "kdyn/error.hpp"
#include "kdyn/green.hpp"

namespace kdyn::cli {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Reals are written as decimal strings at the run precision.
class Fmt {
 public:
  explicit Fmt(long bits) : digits_(decimal_digits(bits)) {}
  std::string operator()(const hp::Real& x) const { return x.to_string(digits_); }
  json operator()(const hp::Complex& z) const { return {{"re", (*this)(z.re)}, {"im", (*this)(z.im)}}; }
  json vec(const hp::CVector& v) const {
    json out = json::array();
    for (const auto& z : v) out.push_back((*this)(z));
    return out;
  }
  json reals(const std::vector<hp::Real>& v) const {
    json out = json::array();
    for (const auto& x : v) out.push_back((*this)(x));
    return out;
  }
  json mat(const hp::CMatrix& m) const {
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < m.cols(); ++c) row.push_back((*this)(m(r, c)));
      out.push_back(row);
    }
    return out;
  }

 private:
  int digits_;
};

std::string cell(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

json rate_json(const jordan::RateCheck& r) {
  return {{"form", r.form},         {"constant", r.constant}, {"holds", r.holds},
          {"first_violation", r.first_violation}, {"exact", r.exact}, {"fit_lo", r.fit_lo},
          {"fit_hi", r.fit_hi}};
}

json theta_json(const jordan::ThetaGroup& t) {
  return {{"kind", jordan::theta_kind_name(t.kind)}, {"order", t.order}};
}

hp::CVector to_cvector(const ExactVector& v) {
  hp::CVector out;
  for (const auto& x : v) out.push_back(x.to_complex());
  return out;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ValidationError, what); }

const ModelConfig& need_model(const RunConfig& c) {
  if (!c.model) invalid("command '" + c.command + "' needs a model section");
  return *c.model;
}

models::TorusAutomorphism need_torus(const RunConfig& c) {
  const auto& m = need_model(c);
  if (m.type != "torus") invalid("command '" + c.command + "' needs a torus model");
  return {m.k, m.A};
}

std::vector<long> range(long lo, long hi) {
  std::vector<long> n;
  for (long i = lo; i <= hi; ++i) n.push_back(i);
  return n;
}

json profile_json(const degrees::DegreeProfile& p, const Fmt& f) {
  json theta = json::array();
  for (const auto& t : p.theta) theta.push_back(theta_json(t));
  return {{"degrees", f.reals(p.degrees)},
          {"multiplicities", p.multiplicities},
          {"entropy", f(p.entropy)},
          {"plateau", {p.plateau.first, p.plateau.second}},
          {"model", models::model_tag_name(p.tag)},
          {"sublattice", p.sublattice},
          {"exact_decisions", p.exact_decisions},
          {"theta", theta}};
}

CommandOutput run_degrees(const RunConfig& c, long bits) {
  Fmt f(bits);
  CommandOutput out;
  const auto action = build_action(need_model(c));
  out.warnings = action.warnings;
  const auto profile = degrees::dynamical_degrees(action, bits);
  const auto concavity = degrees::check_concavity(profile);
  out.result["profile"] = profile_json(profile, f);
  out.result["concavity"] = {{"margins", f.reals(concavity.margins)},
                             {"ratios", f.reals(concavity.ratios)},
                             {"concave", concavity.concave},
                             {"ratios_increasing", concavity.ratios_increasing},
                             {"pattern", concavity.pattern},
                             {"violations", concavity.violations},
                             {"severity", concavity.severity},
                             {"messages", concavity.messages}};
  for (const auto& m : concavity.messages) out.warnings.push_back(m);
  if (!action.pushforward_blocks.empty()) {
    const auto duality = degrees::duality_check(action, profile, bits);
    const auto inverse = degrees::dynamical_degrees(action.inverse(), bits);
    out.result["duality"] = {{"pushforward_radius", f.reals(duality.pushforward_radius)},
                             {"relative_error", duality.relative_error},
                             {"max_error", duality.max_error}};
    out.result["inverse_entropy"] = f(inverse.entropy);
  }
  out.table.header = {"p", "n", "degree_pn", "normalized"};
  const auto n = range(1, c.n_max);
  json sequences = json::array();
  for (int p = 0; p <= action.k; ++p) {
    try {
      const auto seq = degrees::degree_sequence(action, p, n, bits);
      sequences.push_back({{"p", p}, {"fitted_degree", seq.fitted_degree}, {"fit_lo", seq.fit_lo}, {"fit_hi", seq.fit_hi}});
      for (std::size_t i = 0; i < seq.n.size(); ++i)
        out.table.rows.push_back({std::to_string(p), std::to_string(seq.n[i]), f(seq.values[i]), f(seq.normalized[i])});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Overflow) throw;
      out.warnings.push_back("degree sequence p=" + std::to_string(p) + " stopped: " + e.what());
    }
  }
  out.result["sequences"] = sequences;
  return out;
}

CommandOutput run_jordan(const RunConfig& c, long bits) {
  Fmt f(bits);
  CommandOutput out;
  ExactMatrix m;
  const int p = c.jordan ? c.jordan->p : 1;
  if (c.jordan && c.jordan->matrix) {
    m = *c.jordan->matrix;
  } else {
    const auto action = build_action(need_model(c));
    if (p < 0 || p > action.k) invalid("jordan.p must lie in [0, k]");
    m = action.blocks[static_cast<std::size_t>(p)];
  }
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "jordan matrix is not square");
  const auto j = jordan::eigen_structure(m, bits);
  const auto li = jordan::lambda_infinity(m, j, {c.n_max, c.N_max, false, 0});
  out.warnings = li.warnings;

  json factors = json::array();
  for (const auto& fd : j.factors)
    factors.push_back({{"factor", fd.factor.to_string()},
                       {"exponent", fd.exponent},
                       {"block_sizes", fd.block_sizes},
                       {"roots", f.vec(fd.roots)}});
  json blocks = json::array();
  for (const auto& b : j.blocks) blocks.push_back({{"eigenvalue", f(b.eigenvalue)}, {"size", b.size}});
  json dominant = json::array();
  for (const auto& d : j.dominant)
    dominant.push_back({{"eigenvalue", f(d.value)}, {"theta", f(d.theta)}, {"theta_zero", d.theta_zero}, {"blocks", d.blocks}});
  out.result = {{"dim", j.dim},
                {"gaussian", j.gaussian},
                {"char_poly", j.char_poly.to_string()},
                {"factors", factors},
                {"blocks", blocks},
                {"lambda", f(j.spectral_radius)},
                {"m", j.multiplicity},
                {"theta", theta_json(j.theta_group)},
                {"dominant", dominant},
                {"exact_decisions", j.exact_decisions},
                {"limit", f.mat(li.limit)},
                {"averaged", f.mat(li.averaged)},
                {"averaged_rank", li.averaged_rank},
                {"strictly_dominant_dim", li.strictly_dominant_dim},
                {"twisted_rate", rate_json(li.twisted_rate)},
                {"averaged_rate", rate_json(li.averaged_rate)}};

  out.table.header = {"n", "normalized_norm", "norm_deviation", "twisted_deviation", "averaged_deviation"};
  std::vector<std::vector<std::string>> rows;
  try {
    const auto asym = jordan::power_asymptotics(m, j, range(1, c.n_max));
    out.result["asymptotics"] = {{"limit", asym.limit ? json(f(*asym.limit)) : json(nullptr)},
                                 {"fitted_rate", asym.fitted_rate},
                                 {"geometric_ratio", asym.geometric_ratio},
                                 {"rate_kind", asym.rate_kind}};
    for (std::size_t i = 0; i < asym.n_values.size(); ++i)
      rows.push_back({std::to_string(asym.n_values[i]), f(asym.normalized_norms[i]),
                      i < asym.deviations.size() ? f(asym.deviations[i]) : "", "", ""});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Overflow) throw;
    out.warnings.push_back(std::string("power asymptotics stopped: ") + e.what());
  }
  auto put = [&](const jordan::RateCheck& r, std::size_t col) {
    for (std::size_t i = 0; i < r.n.size(); ++i) {
      const auto n = static_cast<std::size_t>(r.n[i]);
      while (rows.size() < n) rows.push_back({std::to_string(rows.size() + 1), "", "", "", ""});
      rows[n - 1][col] = f(r.deviation[i]);
    }
  };
  put(li.twisted_rate, 3);
  put(li.averaged_rate, 4);
  out.table.rows = std::move(rows);
  return out;
}

CommandOutput run_relative(const RunConfig& c, long bits) {
  Fmt f(bits);
  CommandOutput out;
  const auto action = build_action(need_model(c));
  out.warnings = action.warnings;
  const RelativeSection sec = c.relative.value_or(RelativeSection{});
  if (sec.s < 0 || sec.s > action.k) invalid("relative.s must lie in [0, k]");
  hp::CVector T;
  hp::Complex lambda_T;
  if (sec.T) {
    if (!sec.lambda_T) invalid("relative.T needs relative.lambda_T");
    T = to_cvector(*sec.T);
    lambda_T = sec.lambda_T->to_complex();
  } else {
    const auto& kahler = action.kahler_class[static_cast<std::size_t>(sec.s)];
    const auto ces = degrees::cesaro_class_limit(action, to_cvector(kahler), sec.s, c.N_max, bits);
    T = ces.limit;
    lambda_T = sec.lambda_T ? sec.lambda_T->to_complex() : hp::Complex(ces.degree);
  }
  const auto rel = degrees::relative_degrees(action, T, sec.s, lambda_T, bits, c.tolerances.eigen);
  json sub = json::array();
  bool all_hold = true;
  const int top = action.k - sec.s;
  for (int p1 = 1; p1 <= top; ++p1)
    for (int p2 = p1; p1 + p2 <= top; ++p2) {
      const auto r = degrees::submultiplicativity_check(rel, p1, p2, c.tolerances.submultiplicativity);
      all_hold = all_hold && r.holds;
      sub.push_back({{"p1", p1}, {"p2", p2}, {"margin", f(r.margin)}, {"holds", r.holds}});
    }
  out.result = {{"s", rel.s},
                {"T", f.vec(rel.T_class)},
                {"lambda_T", f(rel.lambda_T)},
                {"relative_degrees", f.reals(rel.relative_degrees)},
                {"multiplicities", rel.relative_multiplicities},
                {"quotient_dims", rel.quotient_dims},
                {"eigen_residual", rel.eigen_residual},
                {"lower_bound_margin", f(rel.prop_lower_margin)},
                {"submultiplicativity", sub},
                {"submultiplicative", all_hold}};
  out.table.header = {"p", "lambda_p", "multiplicity", "quotient_dim"};
  for (std::size_t i = 0; i < rel.relative_degrees.size(); ++i)
    out.table.rows.push_back({std::to_string(i + 1), f(rel.relative_degrees[i]),
                              std::to_string(rel.relative_multiplicities[i]), std::to_string(rel.quotient_dims[i])});
  return out;
}

CommandOutput run_cesaro(const RunConfig& c, long bits) {
  Fmt f(bits);
  CommandOutput out;
  const auto action = build_action(need_model(c));
  out.warnings = action.warnings;
  const CesaroSection sec = c.cesaro.value_or(CesaroSection{});
  if (sec.s < 0 || sec.s > action.k) invalid("cesaro.s must lie in [0, k]");
  const ExactVector& S = sec.S ? *sec.S : action.kahler_class[static_cast<std::size_t>(sec.s)];
  const auto r = degrees::cesaro_class_limit(action, to_cvector(S), sec.s, c.N_max, bits);
  out.result = {{"s", r.s},
                {"degree", f(r.degree)},
                {"multiplicity", r.multiplicity},
                {"limit", f.vec(r.limit)},
                {"rate", rate_json(r.rate)},
                {"eigen_residual", r.eigen_residual},
                {"kernel_invariance", r.kernel_invariance},
                {"kernel_dim", r.kernel_dim}};
  out.table.header = {"N", "deviation"};
  for (std::size_t i = 0; i < r.N.size(); ++i) out.table.rows.push_back({std::to_string(r.N[i]), f(r.deviation[i])});
  return out;
}

CommandOutput run_green(const RunConfig& c, long bits) {
  Fmt f(bits);
  CommandOutput out;
  const auto& model = need_model(c);
  const auto action = build_action(model);
  out.warnings = action.warnings;
  const GreenSection sec = c.green.value_or(GreenSection{});
  const auto rec = green::recurrence_machinery(action, sec.nu);
  json coeffs = json::array();
  for (const auto& a : rec.coefficients) coeffs.push_back(a.to_string());
  out.result["recurrence"] = {{"m", rec.m},
                              {"coefficients", coeffs},
                              {"companion_radius", f(rec.companion_radius)},
                              {"companion_multiplicity", rec.companion_multiplicity},
                              {"degree", f(rec.degree)},
                              {"radius_matches", rec.radius_matches},
                              {"char_poly_matches", rec.char_poly_matches},
                              {"nu", rec.nu}};
  out.table.header = {"N", "plain_deviation", "cesaro_deviation"};
  if (model.type != "torus") {
    out.warnings.push_back("limit currents are computed for torus models only; reporting the recurrence");
    return out;
  }
  green::GreenTorusOptions opts;
  opts.N_max = c.N_max;
  opts.sample_from = sec.sample_from;
  opts.sample_to = sec.sample_to;
  opts.targets = sec.targets;
  opts.angle_tolerance = c.tolerances.angle;
  const auto g = green::green_limit_torus({model.k, model.A}, opts);
  const bool divergent = g.sample_spread >= c.tolerances.divergence;
  json samples = json::array();
  for (const auto& s : g.samples)
    samples.push_back({{"n", s.n}, {"angle", s.angle}, {"target", s.target}, {"value", f.vec(s.value)},
                       {"predicted", f.vec(s.predicted)}});
  out.result["green"] = {{"mode", green::green_mode_name(g.mode)},
                         {"degree", f(g.degree)},
                         {"multiplicity", g.multiplicity},
                         {"theta", theta_json(g.theta)},
                         {"limit_class", f.vec(g.limit_class)},
                         {"eigen_residual", g.eigen_residual},
                         {"hermitian_eigenvalues", g.hermitian_eigenvalues},
                         {"positive", g.positive},
                         {"plain_rate", g.mode == green::GreenMode::PlainLimit ? rate_json(g.plain_rate) : json(nullptr)},
                         {"cesaro_rate", rate_json(g.cesaro_rate)},
                         {"samples", samples},
                         {"sample_spread", g.sample_spread},
                         {"divergent", divergent}};
  std::vector<std::vector<std::string>> rows;
  auto put = [&](const jordan::RateCheck& r, std::size_t col) {
    for (std::size_t i = 0; i < r.n.size(); ++i) {
      const auto n = static_cast<std::size_t>(r.n[i]);
      while (rows.size() < n) rows.push_back({std::to_string(rows.size() + 1), "", ""});
      rows[n - 1][col] = f(r.deviation[i]);
    }
  };
  if (g.mode == green::GreenMode::PlainLimit) put(g.plain_rate, 1);
  put(g.cesaro_rate, 2);
  out.table.rows = std::move(rows);
  return out;
}

green::GridFunction sample_trig(const std::vector<equilibrium::TrigPolynomial>& u, int dim, long resolution) {
  for (const auto& p : u)
    for (const auto& t : p.terms)
      if (static_cast<int>(t.freq.size()) != dim)
        throw Error(ErrorCode::DimensionMismatch, "iterate.u frequencies must have the dimension of G");
  std::vector<std::vector<std::pair<std::vector<double>, std::complex<double>>>> terms;
  for (const auto& p : u) {
    terms.emplace_back();
    for (const auto& t : p.terms)
      terms.back().push_back({std::vector<double>(t.freq.begin(), t.freq.end()),
                              {t.coeff.re().get_d(), t.coeff.im().get_d()}});
  }
  return green::GridFunction::sample(dim, resolution, static_cast<int>(u.size()), [&](const std::vector<double>& x) {
    std::vector<std::complex<double>> v;
    for (const auto& comp : terms) {
      std::complex<double> s = 0;
      for (const auto& [freq, coeff] : comp) {
        double phase = 0;
        for (int d = 0; d < dim; ++d) phase += freq[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
        s += coeff * std::polar(1.0, 2 * kPi * phase);
      }
      v.push_back(s);
    }
    return v;
  });
}

CommandOutput run_iterate(const RunConfig& c, long bits) {
  Fmt f(bits);
  CommandOutput out;
  if (!c.iterate) invalid("command 'iterate' needs an iterate section");
  const auto& it = *c.iterate;
  const int dim = static_cast<int>(it.G.size());
  if (dim < 1) invalid("iterate.G must be a non-empty square matrix");
  long resolution = it.resolution ? it.resolution : c.grid_resolution;
  if (resolution == 0) resolution = dim == 1 ? 1L << 14 : dim == 2 ? 1L << 7 : 1L << 4;
  green::IterationSetup setup;
  setup.G = it.G;
  setup.Lambda = it.Lambda;
  setup.nu = it.nu;
  setup.u = sample_trig(it.u, dim, resolution);
  setup.power = it.power;
  if (setup.power == 0) {
    setup.power = green::auto_power(setup);
    if (setup.power == 0)
      throw Error(ErrorCode::HypothesisViolated, "no power n <= 64 satisfies nu < n log(lambda) / log ||G^n||");
  }
  const auto r = green::holder_iteration(setup, c.n_max, c.N_max);
  out.warnings = r.warnings;
  const double bound = std::min(it.nu, std::log(r.lambda) / std::log(r.lipschitz));
  const auto h = green::holder_exponent_estimate(r.v, it.levels, bound);
  if (h.degenerate) out.warnings.push_back("DegenerateFunction: v is constant, Hoelder exponent reported as 1");
  out.result = {{"lambda", r.lambda},
                {"multiplicity", r.multiplicity},
                {"lipschitz", r.lipschitz},
                {"power", r.power},
                {"theta", theta_json(r.theta)},
                {"resolution", resolution},
                {"series_terms", r.series_terms},
                {"floor", r.floor},
                {"twisted_rate", rate_json(r.twisted_rate)},
                {"averaged_rate", rate_json(r.averaged_rate)},
                {"twisted_slope", r.twisted_slope},
                {"averaged_slope", r.averaged_slope},
                {"v_sup", r.v.sup_norm()},
                {"w_sup", r.w.sup_norm()},
                {"holder",
                 {{"exponent", h.exponent},
                  {"constant", h.constant},
                  {"admissible_bound", h.admissible_bound},
                  {"pairs_used", h.pairs_used},
                  {"scales", h.scales},
                  {"oscillations", h.oscillations},
                  {"degenerate", h.degenerate}}}};
  out.table.header = {"n", "twisted_deviation", "averaged_deviation"};
  const std::size_t rows = std::max(r.n.size(), r.N.size());
  for (std::size_t i = 0; i < rows; ++i)
    out.table.rows.push_back({std::to_string(i + 1), i < r.twisted_deviation.size() ? cell(r.twisted_deviation[i]) : "",
                              i < r.averaged_deviation.size() ? cell(r.averaged_deviation[i]) : ""});
  return out;
}

json exact_list(const std::vector<GaussRational>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.to_string());
  return out;
}

CommandOutput run_mixing(const RunConfig& c, long) {
  CommandOutput out;
  const auto t = need_torus(c);
  if (!c.mixing) invalid("command 'mixing' needs a mixing section");
  const auto& mx = *c.mixing;
  equilibrium::TrigPolynomial phi, psi;
  equilibrium::CorrelationReport rep;
  if (mx.mode == "characters") {
    rep = equilibrium::haar_character_correlation(t, mx.m, mx.m_prime, mx.n_lo, mx.n_hi);
    phi = equilibrium::TrigPolynomial::character(mx.m, "m");
    psi = equilibrium::TrigPolynomial::character(mx.m_prime, "m_prime");
  } else {
    phi = *mx.phi;
    psi = *mx.psi;
  }
  if (mx.grid) rep = equilibrium::grid_correlation(t, phi, psi, mx.n_lo, mx.n_hi, c.grid_resolution);
  else if (mx.mode == "trig") rep = equilibrium::trig_correlation(t, phi, psi, mx.n_lo, mx.n_hi);
  out.warnings = rep.warnings;
  out.result = {{"phi", rep.phi_id},
                {"psi", rep.psi_id},
                {"n_lo", mx.n_lo},
                {"n_hi", mx.n_hi},
                {"exact", exact_list(rep.exact)},
                {"max_imag", rep.max_imag},
                {"coincidences", rep.coincidences},
                {"last_coincidence", rep.last_coincidence},
                {"search_limit", rep.search_limit},
                {"hyperbolic", rep.hyperbolic},
                {"escape_certified", rep.escape_certified},
                {"decay_flag", rep.decay_flag},
                {"norm_bound", rep.norm_bound}};
  if (mx.grid) {
    json grid_exact = json::array();
    for (const auto& g : rep.grid_exact) grid_exact.push_back(exact_list(g));
    out.result["grid"] = {{"resolution", rep.resolution}, {"alias_limit", rep.alias_limit}, {"n", rep.grid_n},
                          {"exact", grid_exact},          {"values", rep.grid_values},   {"agrees", rep.grid_agrees}};
  }
  if (mx.ergodic) {
    const auto e = equilibrium::ergodic_average_check(t, phi, psi, mx.n_hi);
    out.result["ergodic"] = {{"exact", exact_list(e.exact)},
                             {"last_coincidence", e.last_coincidence},
                             {"tail_constant", e.tail_constant.to_string()},
                             {"rate_constant", e.rate_constant},
                             {"rate_holds", e.rate_holds},
                             {"converges", e.converges}};
  }
  out.table.header = {"n", "correlation", "exact", "grid"};
  for (std::size_t i = 0; i < rep.n.size(); ++i) {
    std::string grid;
    for (std::size_t g = 0; g < rep.grid_n.size(); ++g)
      if (rep.grid_n[g] == rep.n[i]) grid = cell(rep.grid_values[g]);
    out.table.rows.push_back({std::to_string(rep.n[i]), cell(rep.values[i]), rep.exact[i].to_string(), grid});
  }
  return out;
}

CommandOutput run_chain(const RunConfig& c, long bits) {
  Fmt f(bits);
  CommandOutput out;
  const auto action = build_action(need_model(c));
  out.warnings = action.warnings;
  const auto profile = degrees::dynamical_degrees(action, bits);
  const auto chain = degrees::degree_chain_check(profile);
  if (!chain.applicable) out.warnings.push_back("NotApplicable: " + chain.reason);
  json steps = json::array();
  out.table.header = {"s", "bound", "holds"};
  for (const auto& s : chain.steps) {
    steps.push_back({{"s", s.s}, {"bound", f(s.bound)}, {"holds", s.holds}});
    out.table.rows.push_back({std::to_string(s.s), f(s.bound), s.holds ? "true" : "false"});
  }
  out.result = {{"degrees", f.reals(profile.degrees)},
                {"applicable", chain.applicable},
                {"reason", chain.reason},
                {"m", chain.m},
                {"chain", chain.chain},
                {"steps", steps},
                {"verified", chain.verified}};
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

int decimal_digits(long bits) { return std::max(2, static_cast<int>(std::floor(static_cast<double>(bits) * 0.30103)) - 2); }

std::string CsvTable::to_string() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_escape(cells[i]);
    out += "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

CommandOutput execute(const RunConfig& c) {
  const long bits = c.precision_bits;
  hp::PrecisionGuard guard(bits);
  if (c.command == "degrees") return run_degrees(c, bits);
  if (c.command == "jordan") return run_jordan(c, bits);
  if (c.command == "relative") return run_relative(c, bits);
  if (c.command == "cesaro") return run_cesaro(c, bits);
  if (c.command == "green") return run_green(c, bits);
  if (c.command == "iterate") return run_iterate(c, bits);
  if (c.command == "mixing") return run_mixing(c, bits);
  if (c.command == "chain") return run_chain(c, bits);
  invalid("no command given");
}

RunOutput error_output(const std::string& command, ErrorCode code, const std::string& message,
                       const std::string& format) {
  RunOutput out;
  out.exit_code = 1;
  out.record = {{"command", command},
                {"status", "error"},
                {"error", {{"code", std::string(error_code_name(code))}, {"message", message}}}};
  if (format == "csv") {
    CsvTable t{{"status", "code", "message"}, {{"error", std::string(error_code_name(code)), message}}};
    out.text = t.to_string();
  } else {
    out.text = out.record.dump(2) + "\n";
  }
  return out;
}

RunOutput run(const RunConfig& c) {
  RunOutput out;
  try {
    auto res = execute(c);
    out.record = {{"command", c.command},
                  {"status", "ok"},
                  {"real_format",
                   {{"encoding", "decimal string"},
                    {"precision_bits", c.precision_bits},
                    {"significant_digits", decimal_digits(c.precision_bits)}}},
                  {"config", config_to_json(c)},
                  {"result", std::move(res.result)},
                  {"warnings", res.warnings}};
    out.text = c.format == "csv" ? res.table.to_string() : out.record.dump(2) + "\n";
  } catch (const Error& e) {
    out = error_output(c.command, e.code(), e.what(), c.format);
    out.record["config"] = config_to_json(c);
    if (c.format != "csv") out.text = out.record.dump(2) + "\n";
  } catch (const std::exception& e) {
    out = error_output(c.command, ErrorCode::Internal, e.what(), c.format);
    out.record["config"] = config_to_json(c);
    if (c.format != "csv") out.text = out.record.dump(2) + "\n";
  }
  return out;
}

}  // namespace kdyn::cli
