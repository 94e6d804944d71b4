#pragma once

// JSON encodings shared by the CLI and the tests.
//
//   poly:   {"nvars": n, "terms": [{"alpha": [..], "re": x, "im": y}, ...]}
//           with terms in lexicographic order of alpha
//   matrix: {"dim": d, "re": [[..], ..], "im": [[..], ..]}
//   tuple:  [matrix, ...]
//
// Decoders throw std::invalid_argument on malformed input.

#include <nlohmann/json.hpp>

#include "symcalc/kernels.hpp"
#include "symcalc/multipoly.hpp"
#include "symcalc/ncalc.hpp"
#include "symcalc/norm_estimate.hpp"
#include "symcalc/search.hpp"

namespace symcalc {

using Json = nlohmann::ordered_json;

// digits < 17 rounds coefficients to that many significant digits, which makes
// transform round trips byte-stable.
Json to_json(const Poly &p, int digits = 17);
Poly poly_from_json(const Json &j);

Json to_json(const Matrix &m);
Matrix matrix_from_json(const Json &j);

Json to_json(const MatrixTuple &t);
Json tuple_to_json(const std::vector<Matrix> &mats);
MatrixTuple tuple_from_json(const Json &j);

Json to_json(const NormEstimate &e);

Json to_json(const KernelSpec &s);
KernelSpec kernel_spec_from_json(const Json &j);

Json to_json(const Certificate &c);
Certificate certificate_from_json(const Json &j);

Json to_json(const ConstantReport &r);

Json to_json(const RatioRecord &r);

Json to_json(const ExperimentConfig &c);
ExperimentConfig experiment_config_from_json(const Json &j);

Json to_json(const Example7Report &r);

// Parses text, turning parse errors into std::invalid_argument.
Json parse_json(const std::string &text);

} // namespace symcalc
