#pragma once

#include <json.hpp>
#include <string>

#include "singprof/critical.hpp"
#include "singprof/params.hpp"
#include "singprof/shoot.hpp"
#include "singprof/variational.hpp"
#include "singprof/verification.hpp"

namespace singprof {

using Json = nlohmann::ordered_json;

// Finite doubles as numbers; +/-inf as "+inf"/"-inf"; NaN as null.
Json number(double x);
double number_from(const Json& j);

Json to_json(const Params& p);
Json to_json(const ExtendedReal& e);
Json to_json(const RegimeReport& r);
Json to_json(const InvariantReport& r);
Json to_json(const VerificationDocument& d);
Json to_json(const KappaResult& k);
Json to_json(const LambdaEstimate& l);
Json to_json(const ProfileSolution& s, const std::string& trajectory_csv_path);

RegimeReport regime_from_json(const Json& j);
VerificationDocument document_from_json(const Json& j);

// Exit code recomputed from a serialized document.
int exit_code_from_json(const Json& j);

// Two-space indented, trailing newline.
std::string dump(const Json& j);

std::string format_g17(double x);

}  // namespace singprof
