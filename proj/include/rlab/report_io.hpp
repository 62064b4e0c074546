#pragma once

#include <iosfwd>

#include "json.hpp"
#include "rlab/functional.hpp"
#include "rlab/phase.hpp"
#include "rlab/solver.hpp"

namespace rlab {

using nlohmann::json;

json to_json(const Resolution& r);
json to_json(const SolverConfig& c);
json to_json(const FunctionalReport& r);
json to_json(const OracleResult& r);
json to_json(const ContractionDiagnostics& d);
/// Node values as [[re, im], ...] plus the quadrature sizes.
json to_json(const SphereField& f);
json to_json(const CriticalPointReport& r);
/// {xi: [..], c_re, c_im, residual_rel, argmax_value}
json to_json(const CharacterFit& fit);

FunctionalReport functional_report_from_json(const json& j);
CharacterFit character_fit_from_json(const json& j);

/// CSV `iter,residual,q,lambda`.
void write_history_csv(std::ostream& os, const CriticalPointReport& r);
/// CSV `r,theta_index,phi_index,re,im`; the angular index is split polar-major.
void write_ball_field_csv(std::ostream& os, const BallField& b);

}  // namespace rlab
