#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lambkit/countermodel.hpp"
#include "lambkit/parse.hpp"
#include "lambkit/prover.hpp"
#include "lambkit/unigraph.hpp"

namespace lambkit {

using nlohmann::json;

// -- proofs -------------------------------------------------------------------

inline json proof_to_json(const Proof& p) {
  json j;
  j["rule"] = rule_name(p->rule);
  j["sequent"] = render_sequent(p->conclusion);
  json prem = json::array();
  for (const auto& q : p->premises) prem.push_back(proof_to_json(q));
  j["premises"] = std::move(prem);
  json data = json::object();
  if (p->data.pos) data["pos"] = *p->data.pos;
  if (p->data.count) data["n"] = *p->data.count;
  if (p->data.hyp) data["hyp"] = *p->data.hyp;
  if (p->data.cut) data["cut"] = render_formula(*p->data.cut);
  if (p->data.approximate) data["approximate"] = true;
  j["data"] = std::move(data);
  return j;
}

inline Proof proof_from_json(const json& j) {
  auto rule = rule_from_name(j.at("rule").get<std::string>());
  if (!rule) throw std::runtime_error("unknown rule in proof: " + j.at("rule").dump());
  Sequent s = parse_sequent(j.at("sequent").get<std::string>());
  std::vector<Proof> prem;
  for (const auto& q : j.at("premises")) prem.push_back(proof_from_json(q));
  RuleData d;
  if (j.contains("data")) {
    const json& data = j["data"];
    if (data.contains("pos")) d.pos = data["pos"].get<int>();
    if (data.contains("n")) d.count = data["n"].get<int>();
    if (data.contains("hyp")) d.hyp = data["hyp"].get<int>();
    if (data.contains("cut")) d.cut = parse_formula(data["cut"].get<std::string>());
    if (data.contains("approximate")) d.approximate = data["approximate"].get<bool>();
  }
  return make_proof(*rule, std::move(s), std::move(prem), std::move(d));
}

// -- relations and models -----------------------------------------------------

inline json relation_to_json(const Relation& r) {
  json j = json::array();
  for (auto [i, k] : r.pairs()) j.push_back(json::array({i, k}));
  return j;
}

inline Relation relation_from_json(const json& j, int n) {
  Relation r(n);
  for (const auto& p : j) {
    const int i = p.at(0).get<int>(), k = p.at(1).get<int>();
    if (i < 0 || i >= n || k < 0 || k >= n)
      throw std::runtime_error("relation pair out of range");
    r.set(i, k);
  }
  return r;
}

inline json model_to_json(const RModel& m) {
  json j;
  j["n"] = m.n;
  if (m.square())
    j["U"] = "square";
  else
    j["U"] = relation_to_json(m.u);
  json val = json::object();
  for (const auto& [name, r] : m.valuation) val[name] = relation_to_json(r);
  j["valuation"] = std::move(val);
  return j;
}

inline json model_to_json(const NSModel& m) {
  json j;
  j["n"] = m.n;
  j["U"] = "square";
  json val = json::object();
  for (const auto& [name, r] : m.valuation) val[name] = relation_to_json(r);
  j["valuation"] = std::move(val);
  json fam = json::array();
  for (const auto& r : m.family) fam.push_back(relation_to_json(r));
  j["family"] = std::move(fam);
  j["unit"] = relation_to_json(m.unit);
  j["zero"] = relation_to_json(m.zero);
  j["product_closed"] = m.product_closed;
  return j;
}

inline json model_to_json(const ModelVariant& m) {
  return std::visit([](const auto& x) { return model_to_json(x); }, m);
}

/// A model file either describes a plain (possibly relativised) model or, if
/// a "family" key is present, a non-standard one. Missing unit/zero of a
/// family are computed.
inline ModelVariant model_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  if (n < 1 || n > 64) throw std::runtime_error("model size out of range");
  if (j.contains("family")) {
    NSModel m;
    m.n = n;
    for (const auto& r : j["family"]) m.family.push_back(relation_from_json(r, n));
    if (j.contains("product_closed")) m.product_closed = j["product_closed"].get<bool>();
    if (j.contains("unit"))
      m.unit = relation_from_json(j["unit"], n);
    else if (auto u = find_unit(m.family))
      m.unit = *u;
    else
      throw std::runtime_error("family has no unit");
    if (j.contains("zero"))
      m.zero = relation_from_json(j["zero"], n);
    else if (auto z = find_zero(m.family))
      m.zero = *z;
    else
      throw std::runtime_error("family has no zero");
    if (j.contains("valuation"))
      for (const auto& [name, r] : j["valuation"].items())
        m.valuation[name] = relation_from_json(r, n);
    return m;
  }
  RModel m;
  m.n = n;
  if (!j.contains("U") || (j["U"].is_string() && j["U"].get<std::string>() == "square"))
    m.u = Relation::full(n);
  else
    m.u = relation_from_json(j["U"], n);
  if (!m.u.is_transitive()) throw std::runtime_error("universal relation must be transitive");
  m.constants = m.square() ? RModel::Constants::Standard : RModel::Constants::Absent;
  if (j.contains("constants")) {
    const auto c = j["constants"].get<std::string>();
    if (c == "standard")
      m.constants = RModel::Constants::Standard;
    else if (c == "absent")
      m.constants = RModel::Constants::Absent;
    else
      throw std::runtime_error("constants must be \"standard\" or \"absent\"");
  }
  if (j.contains("valuation"))
    for (const auto& [name, r] : j["valuation"].items()) {
      Relation v = relation_from_json(r, n);
      if (!v.subset_of(m.u)) throw std::runtime_error("valuation of " + name + " outside U");
      m.valuation[name] = v;
    }
  return m;
}

inline ModelVariant load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  json j;
  in >> j;
  return model_from_json(j);
}

// -- graphs -------------------------------------------------------------------

inline json graph_to_json(const LabeledGraph& g) {
  json j;
  j["stage"] = g.stage;
  json verts = json::array();
  for (int v = 0; v < g.vertex_count; ++v) verts.push_back(v);
  j["vertices"] = std::move(verts);
  json edges = json::array();
  for (const auto& [e, info] : g.edges) {
    json je;
    je["from"] = e.first;
    je["to"] = e.second;
    je["label"] = render_formula(info.label);
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  return j;
}

inline std::string graph_to_dot(const LabeledGraph& g) {
  std::ostringstream out;
  out << "digraph stages {\n  rankdir=LR;\n";
  for (int v = 0; v < g.vertex_count; ++v) out << "  v" << v << ";\n";
  for (const auto& [e, info] : g.edges)
    out << "  v" << e.first << " -> v" << e.second << " [label=\""
        << render_formula(info.label) << "\"];\n";
  out << "}\n";
  return out.str();
}

// -- hypotheses files ---------------------------------------------------------

/// One sequent per line; blank lines and # comments are ignored.
inline std::vector<Sequent> parse_hypotheses(const std::string& text) {
  std::vector<Sequent> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    out.push_back(parse_sequent(line));
  }
  return out;
}

inline std::vector<Sequent> load_hypotheses(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open hypotheses file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_hypotheses(ss.str());
}

}  // namespace lambkit
