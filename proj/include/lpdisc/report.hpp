#pragma once

#include <json.hpp>

#include "lpdisc/certificates.hpp"
#include "lpdisc/discrepancy.hpp"

namespace lpdisc {

nlohmann::ordered_json to_json(const CurseCertificate& cert);
nlohmann::ordered_json to_json(const DiscrepancyEstimate& estimate);
nlohmann::ordered_json to_json(const TableComparison& row);

}  // namespace lpdisc
