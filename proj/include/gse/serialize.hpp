#ifndef GSE_SERIALIZE_HPP_
#define GSE_SERIALIZE_HPP_

#include <json.hpp>
#include <string>

#include "gse/sets.hpp"

namespace gse {

/// {"type": "...", "fields": {...}} with full double precision. Round-trips
/// through from_json exactly.
nlohmann::json to_json(const SetValue& s);
SetValue from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);

}  // namespace gse

#endif  // GSE_SERIALIZE_HPP_
