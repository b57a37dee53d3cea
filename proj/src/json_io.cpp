#include "sigma/json_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "sigma/text.hpp"

namespace sigma::io {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

Json integer(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

Json point_list(const std::vector<Point>& xs) {
  Json arr = Json::array();
  for (const auto& x : xs) arr.push_back(x.to_string());
  return arr;
}

}  // namespace

Rational parse_rational(std::string_view s) {
  s = text::trim(s);
  std::string_view body = s;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  auto slash = body.find('/');
  auto num = body.substr(0, slash);
  auto den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  require(all_digits(num) && all_digits(den), "malformed rational '" + std::string(s) + "'");
  require(den.find_first_not_of('0') != std::string_view::npos, "zero denominator in '" + std::string(s) + "'");
  Rational q(std::string(s.substr(0, s.size() - body.size())) + std::string(num) + "/" + std::string(den));
  q.canonicalize();
  return q;
}

std::string rational_string(const Rational& q) { return q.get_str(); }

std::vector<bool> parse_bits(std::string_view s) {
  s = text::trim(s);
  std::vector<bool> bits;
  for (char c : s) {
    if (c == ',' || c == ' ') continue;
    require(c == '0' || c == '1', "bits must be 0 or 1, got '" + std::string(1, c) + "'");
    bits.push_back(c == '1');
  }
  return bits;
}

std::string bits_string(const std::vector<bool>& bits) {
  std::string s;
  for (bool b : bits) s += b ? '1' : '0';
  return s;
}

BinaryArray parse_binary_array(std::string_view input) {
  BinaryArray x;
  std::size_t line_no = 0;
  for (auto line : text::split(input, '\n')) {
    ++line_no;
    line = text::trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto colon = line.find(':');
    require(colon != std::string_view::npos,
            "line " + std::to_string(line_no) + ": expected 'element: {levels}'");
    auto g = static_cast<Element>(text::parse_uint(line.substr(0, colon), "element"));
    const auto levels = Point::parse(line.substr(colon + 1));
    for (auto level : levels.elements()) x.ones.emplace(g, level);
  }
  return x;
}

std::vector<SignedVector> parse_points(std::string_view input) {
  std::vector<SignedVector> pts;
  std::size_t line_no = 0;
  for (auto line : text::split(input, '\n')) {
    ++line_no;
    line = text::trim(line);
    if (!line.empty() && line.front() == '#') continue;
    if (line.empty()) continue;
    SignedVector v;
    if (line != "0") {
      for (auto item : text::split(line, ',')) {
        auto colon = item.find(':');
        require(colon != std::string_view::npos,
                "line " + std::to_string(line_no) + ": expected 'element:value'");
        auto g = static_cast<Element>(text::parse_uint(item.substr(0, colon), "element"));
        require(!v.coords.count(g), "line " + std::to_string(line_no) + ": repeated element");
        auto q = parse_rational(item.substr(colon + 1));
        if (sgn(q) != 0) v.coords.emplace(g, q);
      }
    }
    pts.push_back(std::move(v));
  }
  return pts;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json to_json(const ExtNat& v) {
  if (v.is_omega()) return "w";
  return v.value();
}

Json to_json(const NormalForm& nf) {
  Json j;
  j["i"] = to_json(nf.i);
  Json upper = Json::object();
  for (const auto& [n, e] : nf.upper) upper[std::to_string(n)] = e;
  j["upper"] = upper;
  if (nf.tail > 0) {
    j["tail"] = nf.tail;
    j["tail_from"] = nf.tail_from;
  }
  j["text"] = nf.to_string();
  return j;
}

Json to_json(const BasicBox& b) {
  Json j;
  j["text"] = b.to_string();
  j["ambient"] = b.ambient.to_string();
  Json cs = Json::array();
  for (const auto& [s, c] : b.constraints)
    cs.push_back({{"coordinate", s}, {"F", c.F.to_string()}, {"G", c.G.to_string()}});
  j["constraints"] = cs;
  return j;
}

Json to_json(const ClopenSet& c) {
  Json boxes = Json::array();
  for (const auto& b : c.boxes) boxes.push_back(b.to_string());
  return {{"ambient", c.ambient.to_string()}, {"boxes", boxes}};
}

Json to_json(const BoxReduction& r) {
  Json removed = Json::object(), avoided = Json::object();
  for (const auto& [s, F] : r.removed) removed[std::to_string(s)] = F.to_string();
  for (const auto& [s, A] : r.avoided) avoided[std::to_string(s)] = A.to_string();
  return {{"type", r.type.to_string()},
          {"simplified", r.type.simplified().to_string()},
          {"map", "y_s -> y_s \\ F_s"},
          {"removed", removed},
          {"avoided", avoided}};
}

Json to_json(const AveragingOperator& op) {
  Json blocks = Json::array();
  for (auto b : op.blocks) blocks.push_back(b);
  auto en = op.domain_enumerator();
  Json rows = Json::array();
  for (std::size_t r = 0; r < op.rows.size(); ++r) {
    Json entries = Json::array();
    for (const auto& e : op.rows[r]) {
      auto x = en.at(e.domain);
      x.prefix.resize(op.domain_arity(), x.tail_value);
      entries.push_back({point_list(x.prefix), integer(e.weight.get_num()), integer(e.weight.get_den())});
    }
    const auto& y = op.codomain[r];
    Json yj = op.blocks.size() == 1 ? Json(y.coordinate(0).to_string()) : Json(y.to_string());
    rows.push_back({{"y", yj}, {"entries", entries}});
  }
  return {{"blocks", blocks},
          {"ground", op.ground},
          {"domain", op.domain_descriptor().to_string()},
          {"codomain", op.codomain_descriptor().to_string()},
          {"rows", rows}};
}

Json to_json(const AxiomReport& r) {
  return {{"rao_axioms", r.ok() ? "pass" : "fail"},
          {"preserves_one", r.preserves_one},
          {"positive", r.positive},
          {"inverts_map", r.inverts_map},
          {"rows", r.rows},
          {"failures", r.failures}};
}

Json to_json(const DeltaSearch& s) {
  Json petals = Json::array();
  for (auto l : s.best.petal_labels) petals.push_back(l);
  Json j = {{"found", s.found},
            {"exact", s.exact},
            {"max_petals", s.max_petals},
            {"root", s.best.root.to_string()},
            {"petals", petals}};
  if (s.best.petal_size) j["petal_size"] = *s.best.petal_size;
  return j;
}

Json to_json(const CommonPointWitness& w) {
  Json j = {{"ok", w.ok}, {"root", w.root.to_string()}};
  j["M"] = w.M;
  if (w.failed_stage.empty() || w.failed_stage == "checker") {
    j["lambda0"] = w.lambda0;
    j["S"] = w.S;
  }
  j["subsets_checked"] = w.subsets_checked;
  j["boxes_nonempty"] = w.boxes_nonempty;
  j["members_verified"] = w.members_verified;
  if (!w.failed_stage.empty()) j["failed_stage"] = w.failed_stage;
  return j;
}

Json to_json(const WeightTable& t) {
  Json r = Json::array(), M = Json::array();
  for (const auto& q : t.r) r.push_back(rational_string(q));
  for (auto m : t.M) M.push_back(m);
  return {{"r", r}, {"M", M}};
}

Json to_json(const PipelineReport& rep) {
  Json points = Json::array();
  for (const auto& p : rep.points) {
    Json x = Json::object(), phi = Json::object(), counts = Json::object(), lifts = Json::object();
    for (const auto& [g, v] : p.point.coords) x[std::to_string(g)] = rational_string(v);
    for (const auto& [g, v] : p.phi_values) phi[std::to_string(g)] = rational_string(v);
    for (const auto& [l, c] : p.level_counts) counts[std::to_string(l)] = c;
    for (const auto& [l, lift] : p.union_lifts) lifts[std::to_string(l)] = point_list(lift);
    Json bits = Json::array();
    for (const auto& [g, l] : p.preimage.ones) bits.push_back({g, l});
    points.push_back({{"point", x},
                      {"preimage", bits},
                      {"phi", phi},
                      {"l0_sum", rational_string(p.l0_sum)},
                      {"in_L0", p.in_L0_exact},
                      {"within_tolerance", p.within_tolerance},
                      {"level_counts", counts},
                      {"within_level_bounds", p.within_level_bounds},
                      {"union_lifts", lifts}});
  }
  return {{"ok", rep.ok()},
          {"N", rep.truncation},
          {"tolerance", rational_string(rep.tolerance)},
          {"points", points},
          {"chain", rep.chain}};
}

Json to_json(const Decomposition& d, const DecompositionReport& r) {
  Json pieces = Json::array();
  for (const auto& p : d.pieces()) {
    pieces.push_back({{"label", p.label.to_string()},
                      {"box", p.box.to_string()},
                      {"claimed_type", p.claimed_type.to_string()},
                      {"reduced_type", box_reduce(p.box).type.simplified().to_string()}});
  }
  Json verification = {{"ok", r.ok()},
                       {"types_ok", r.types_ok},
                       {"pairs_checked", r.pairs_checked},
                       {"disjoint", r.disjoint_ok},
                       {"samples", r.samples},
                       {"limit_hits", r.limit_hits},
                       {"sample_failures", r.sample_failures},
                       {"neighborhoods", r.neighborhoods},
                       {"cofinite_failures", r.cofinite_failures},
                       {"failures", r.failures}};
  return {{"ambient", d.ambient().to_string()},
          {"witnesses", d.witnesses()},
          {"depth", d.depth()},
          {"limit", d.limit().to_string()},
          {"pieces", pieces},
          {"verification", verification}};
}

}  // namespace sigma::io
