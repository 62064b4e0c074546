#include "rlab/report_io.hpp"

#include <iomanip>
#include <ostream>

namespace rlab {

json to_json(const Resolution& r) {
  return {{"n_polar", r.n_polar},   {"n_azimuthal", r.n_azimuthal}, {"n_radial", r.n_radial},
          {"n_circle", r.n_circle}, {"band_limit", r.band_limit}};
}

json to_json(const SolverConfig& c) {
  return {{"max_iters", c.max_iters},
          {"tol_residual", c.tol_residual},
          {"eps_split", c.eps_split},
          {"ball_radius_exponent", c.ball_radius_exponent},
          {"seed", c.seed},
          {"resolution", to_json(c.resolution)}};
}

json to_json(const FunctionalReport& r) {
  return {{"q_value", r.q_value},
          {"lambda_value", r.lambda_value},
          {"multiplier_estimate", r.multiplier_estimate},
          {"el_residual_rel", r.el_residual_rel},
          {"norms", {{"l2_f", r.norms.l2_f}, {"l2_conv", r.norms.l2_conv}}}};
}

FunctionalReport functional_report_from_json(const json& j) {
  FunctionalReport r;
  r.q_value = j.at("q_value").get<double>();
  r.lambda_value = j.at("lambda_value").get<double>();
  r.multiplier_estimate = j.at("multiplier_estimate").get<double>();
  r.el_residual_rel = j.at("el_residual_rel").get<double>();
  r.norms.l2_f = j.at("norms").at("l2_f").get<double>();
  r.norms.l2_conv = j.at("norms").at("l2_conv").get<double>();
  return r;
}

json to_json(const OracleResult& r) {
  return {{"lambda_oracle", r.value}, {"tail_bound", r.tail_bound}, {"xi_max", r.xi_max}, {"n_xi", r.n_xi}};
}

json to_json(const ContractionDiagnostics& d) {
  return {{"eps", d.eps},
          {"ball_radius", d.ball_radius},
          {"split_degree", d.split_degree},
          {"rough_norm", d.rough_norm},
          {"linear_term_norm", d.linear_term_norm},
          {"increments", d.increments},
          {"contraction_ratio", d.contraction_ratio},
          {"ratio_measured", d.ratio_measured},
          {"max_ball_distance", d.max_ball_distance},
          {"stayed_in_ball", d.stayed_in_ball},
          {"converged", d.converged},
          {"refined_residual", d.refined_residual}};
}

json to_json(const SphereField& f) {
  json values = json::array();
  for (const cplx v : f.values()) values.push_back({v.real(), v.imag()});
  return {{"n_polar", f.quadrature().n_polar()}, {"n_azimuthal", f.quadrature().n_azimuthal()}, {"values", values}};
}

json to_json(const CriticalPointReport& r) {
  json j = {{"lambda", r.lambda},
            {"q", r.q},
            {"residual_history", r.residual_history()},
            {"spectrum_tail", r.spectrum_tail},
            {"evenness_defect", r.evenness_defect},
            {"min_value", r.min_value},
            {"converged", r.converged},
            {"iterations", r.history.size()},
            {"final_field", to_json(r.final_field)}};
  if (r.contraction) j["contraction"] = to_json(*r.contraction);
  return j;
}

json to_json(const CharacterFit& fit) {
  return {{"xi", {fit.xi.x, fit.xi.y, fit.xi.z}},
          {"c_re", fit.c.real()},
          {"c_im", fit.c.imag()},
          {"residual_rel", fit.residual_rel},
          {"argmax_value", fit.argmax_value}};
}

CharacterFit character_fit_from_json(const json& j) {
  CharacterFit fit;
  const auto& xi = j.at("xi");
  fit.xi = {xi.at(0).get<double>(), xi.at(1).get<double>(), xi.at(2).get<double>()};
  fit.c = {j.at("c_re").get<double>(), j.at("c_im").get<double>()};
  fit.residual_rel = j.at("residual_rel").get<double>();
  fit.argmax_value = j.at("argmax_value").get<double>();
  return fit;
}

void write_history_csv(std::ostream& os, const CriticalPointReport& r) {
  const auto old = os.precision(17);
  os << "iter,residual,q,lambda\n";
  for (const auto& h : r.history) os << h.iter << ',' << h.residual << ',' << h.q << ',' << h.lambda << '\n';
  os.precision(old);
}

void write_ball_field_csv(std::ostream& os, const BallField& b) {
  const BallGrid& g = b.grid();
  const auto& ang = g.angular();
  const auto old = os.precision(17);
  os << "r,theta_index,phi_index,re,im\n";
  const std::size_t na = ang.size();
  const auto naz = static_cast<std::size_t>(ang.n_azimuthal());
  for (std::size_t k = 0; k < b.values().size(); ++k) {
    const std::size_t i = k / na, j = k % na;
    const cplx v = b.values()[k];
    os << g.radial_nodes()[i] << ',' << j / naz << ',' << j % naz << ',' << v.real() << ','
       << v.imag() << '\n';
  }
  os.precision(old);
}

}  // namespace rlab
