#include "lpdisc/report.hpp"

namespace lpdisc {

using nlohmann::ordered_json;

ordered_json to_json(const CurseCertificate& cert) {
  ordered_json j;
  j["q"] = cert.q;
  j["p"] = cert.p;
  j["scheme"] = to_string(cert.scheme);
  j["a"] = cert.a;
  j["c"] = cert.c ? ordered_json(*cert.c) : ordered_json(nullptr);
  j["alpha1"] = cert.alpha1;
  j["alpha2"] = cert.alpha2;
  j["alpha3"] = cert.alpha3;
  j["C"] = cert.C;
  j["C_minus_1"] = cert.C_minus_1;
  j["sign_checks_passed"] = cert.sign_checks_passed;
  j["balance_residual"] = cert.balance_residual;
  j["tolerances"] = {{"alpha_identity", cert.tolerances.alpha_identity},
                     {"balance_relative", cert.tolerances.balance_relative},
                     {"sign", cert.tolerances.sign},
                     {"cross_check_relative", cert.tolerances.cross_check_relative}};
  ordered_json checks = ordered_json::array();
  for (const Check& c : cert.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"residual", c.residual}});
  }
  j["checks"] = std::move(checks);
  return j;
}

ordered_json to_json(const DiscrepancyEstimate& estimate) {
  ordered_json j;
  j["value"] = estimate.value;
  j["method"] = to_string(estimate.method);
  j["std_error"] = estimate.std_error;
  j["samples"] = estimate.samples;
  j["seed"] = estimate.seed ? ordered_json(*estimate.seed) : ordered_json(nullptr);
  return j;
}

ordered_json to_json(const TableComparison& row) {
  return {{"q", row.q},
          {"printed", row.printed},
          {"printed_value", row.printed_value},
          {"closed_form_C", row.closed_form_C},
          {"closed_form_C_minus_1", row.closed_form_C_minus_1},
          {"pipeline_C_minus_1", row.pipeline_C_minus_1},
          {"printed_minus_closed", row.printed_minus_closed},
          {"matches", row.matches}};
}

}  // namespace lpdisc
