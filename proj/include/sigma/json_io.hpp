#pragma once

// JSON mirrors of the library types and the small line-oriented input
// formats read by the command-line tool.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sigma/averaging.hpp"
#include "sigma/classify.hpp"
#include "sigma/clopen.hpp"
#include "sigma/combinatorics.hpp"
#include "sigma/decompose.hpp"
#include "sigma/uec.hpp"

namespace sigma::io {

using Json = nlohmann::ordered_json;

/// "p/q", "-p/q" or an integer; canonicalized.
Rational parse_rational(std::string_view s);
std::string rational_string(const Rational& q);

/// "1,0,1" or "101".
std::vector<bool> parse_bits(std::string_view s);
std::string bits_string(const std::vector<bool>& bits);

/// Lines "element: {level,level}".
BinaryArray parse_binary_array(std::string_view text);
/// One point per line, "element:value, element:value"; empty line = origin.
std::vector<SignedVector> parse_points(std::string_view text);

std::string read_file(const std::string& path);

Json to_json(const ExtNat& v);
Json to_json(const NormalForm& nf);
Json to_json(const BasicBox& b);
Json to_json(const ClopenSet& c);
Json to_json(const BoxReduction& r);
Json to_json(const AveragingOperator& op);
Json to_json(const AxiomReport& r);
Json to_json(const DeltaSearch& s);
Json to_json(const CommonPointWitness& w);
Json to_json(const WeightTable& t);
Json to_json(const PipelineReport& r);
Json to_json(const Decomposition& d, const DecompositionReport& r);

}  // namespace sigma::io
