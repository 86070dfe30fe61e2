#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "devissage/sequences.hpp"

namespace devissage {

namespace detail {

using JsonIn = nlohmann::json;

[[noreturn]] inline void field_error(const std::string &path, const std::string &what) {
  throw ParseError("field " + path + ": " + what);
}

inline const JsonIn &member(const JsonIn &obj, const std::string &key, const std::string &path) {
  if (!obj.is_object()) field_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) field_error(path + "/" + key, "missing");
  return *it;
}

inline std::string as_string(const JsonIn &v, const std::string &path) {
  if (!v.is_string()) field_error(path, "expected a string");
  return v.get<std::string>();
}

inline long long as_int(const JsonIn &v, const std::string &path) {
  if (!v.is_number_integer()) field_error(path, "expected an integer");
  return v.get<long long>();
}

inline Integer as_integer(const JsonIn &v, const std::string &path) {
  if (v.is_number_integer()) return Integer(v.get<long long>());
  if (v.is_string()) {
    try {
      return Integer(v.get<std::string>());
    } catch (const std::exception &) {
      field_error(path, "not an integer literal");
    }
  }
  field_error(path, "expected an integer");
}

inline const JsonIn &as_array(const JsonIn &v, const std::string &path) {
  if (!v.is_array()) field_error(path, "expected an array");
  return v;
}

inline std::string at(const std::string &path, std::size_t i) { return path + "/" + std::to_string(i); }

/// Line and column of a byte offset.
inline std::string text_position(const std::string &text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace detail

/// Instance from its JSON text.  Graph-level problems surface as the
/// corresponding domain errors; malformed input raises ParseError.
inline SingularityInstance parse_instance(const std::string &text, const std::string &name = "input") {
  using detail::JsonIn;
  JsonIn doc;
  try {
    doc = JsonIn::parse(text);
  } catch (const JsonIn::parse_error &e) {
    throw ParseError(name + ": " + detail::text_position(text, e.byte == 0 ? 0 : e.byte - 1) +
                     ": malformed JSON");
  }
  if (!doc.is_object()) detail::field_error("/", "expected an object");

  SingularityInstance inst;
  inst.name = doc.contains("name") ? detail::as_string(doc["name"], "/name") : name;

  std::vector<DualGraph::Component> comps;
  std::map<std::string, std::size_t> comp_index, node_index, div_index;
  const JsonIn &jc = detail::as_array(detail::member(doc, "components", ""), "/components");
  for (std::size_t i = 0; i < jc.size(); ++i) {
    const std::string p = detail::at("/components", i);
    std::string id = detail::as_string(detail::member(jc[i], "id", p), p + "/id");
    long long genus = detail::as_int(detail::member(jc[i], "genus", p), p + "/genus");
    if (genus < 0) detail::field_error(p + "/genus", "negative genus");
    if (!comp_index.emplace(id, i).second) detail::field_error(p + "/id", "duplicate id " + id);
    comps.push_back({id, static_cast<unsigned>(genus)});
  }
  std::vector<std::string> nodes;
  const JsonIn &jn = detail::as_array(detail::member(doc, "nodes", ""), "/nodes");
  for (std::size_t i = 0; i < jn.size(); ++i) {
    std::string id = detail::as_string(jn[i], detail::at("/nodes", i));
    if (comp_index.count(id) || !node_index.emplace(id, i).second)
      detail::field_error(detail::at("/nodes", i), "duplicate id " + id);
    nodes.push_back(id);
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  const JsonIn &je = detail::as_array(detail::member(doc, "edges", ""), "/edges");
  for (std::size_t i = 0; i < je.size(); ++i) {
    const std::string p = detail::at("/edges", i);
    if (!je[i].is_array() || je[i].size() != 2) detail::field_error(p, "expected a pair of ids");
    std::string a = detail::as_string(je[i][0], p + "/0"), b = detail::as_string(je[i][1], p + "/1");
    if (node_index.count(a)) std::swap(a, b);
    if (!comp_index.count(a) || !node_index.count(b))
      detail::field_error(p, "an edge joins a component and a node");
    edges.emplace_back(comp_index[a], node_index[b]);
  }

  std::vector<Divisor> divisors;
  if (doc.contains("divisors")) {
    const JsonIn &jd = detail::as_array(doc["divisors"], "/divisors");
    for (std::size_t i = 0; i < jd.size(); ++i) {
      const std::string p = detail::at("/divisors", i);
      Divisor d;
      d.id = detail::as_string(detail::member(jd[i], "id", p), p + "/id");
      if (comp_index.count(d.id) || node_index.count(d.id) || !div_index.emplace(d.id, i).second)
        detail::field_error(p + "/id", "duplicate id " + d.id);
      const JsonIn &loc = detail::member(jd[i], "at", p);
      if (loc.contains("node")) {
        std::string n = detail::as_string(loc["node"], p + "/at/node");
        if (!node_index.count(n)) detail::field_error(p + "/at/node", "unknown node " + n);
        d.at = Divisor::At::Node;
        d.where = node_index[n];
      } else if (loc.contains("component")) {
        std::string c = detail::as_string(loc["component"], p + "/at/component");
        if (!comp_index.count(c)) detail::field_error(p + "/at/component", "unknown component " + c);
        d.at = Divisor::At::Component;
        d.where = comp_index[c];
      } else {
        detail::field_error(p + "/at", "expected node or component");
      }
      divisors.push_back(d);
    }
  }

  // Generators: a list of cycle lists, or a bare cycle list for one generator.
  std::vector<Permutation> vertex_action, divisor_action;
  std::vector<bool> mentions_divisor;
  if (doc.contains("action")) {
    const JsonIn &ja = detail::as_array(doc["action"], "/action");
    std::vector<std::pair<const JsonIn *, std::string>> gens;
    const bool flat = !ja.empty() && ja[0].is_array() && !ja[0].empty() && ja[0][0].is_string();
    if (flat) gens.emplace_back(&ja, "/action");
    else
      for (std::size_t i = 0; i < ja.size(); ++i) gens.emplace_back(&ja[i], detail::at("/action", i));
    const std::size_t nv = comps.size() + nodes.size();
    for (const auto &[jg, path] : gens) {
      detail::as_array(*jg, path);
      Permutation vp = identity_permutation(nv), dp = identity_permutation(divisors.size());
      std::vector<bool> seen_v(nv, false), seen_d(divisors.size(), false);
      bool any_div = false;
      for (std::size_t c = 0; c < jg->size(); ++c) {
        const std::string cp = detail::at(path, c);
        const JsonIn &cyc = detail::as_array((*jg)[c], cp);
        std::vector<std::pair<bool, std::size_t>> elems;
        for (std::size_t k = 0; k < cyc.size(); ++k) {
          std::string id = detail::as_string(cyc[k], detail::at(cp, k));
          if (comp_index.count(id)) elems.emplace_back(false, comp_index[id]);
          else if (node_index.count(id)) elems.emplace_back(false, comps.size() + node_index[id]);
          else if (div_index.count(id)) elems.emplace_back(true, div_index[id]);
          else detail::field_error(detail::at(cp, k), "unknown id " + id);
          auto &seen = elems.back().first ? seen_d : seen_v;
          if (seen[elems.back().second]) detail::field_error(detail::at(cp, k), "id repeated in generator: " + id);
          seen[elems.back().second] = true;
          if (elems.back().first != elems.front().first)
            detail::field_error(cp, "cycle mixes divisors with graph vertices");
        }
        for (std::size_t k = 0; k < elems.size(); ++k) {
          const auto &[is_div, from] = elems[k];
          const std::size_t to = elems[(k + 1) % elems.size()].second;
          (is_div ? dp : vp)[from] = to;
        }
        any_div = any_div || (!elems.empty() && elems.front().first);
      }
      vertex_action.push_back(vp);
      divisor_action.push_back(dp);
      mentions_divisor.push_back(any_div);
    }
  }

  inst.graph = DualGraph(std::move(comps), std::move(nodes), std::move(edges), vertex_action);
  const DualGraph &g = inst.graph;

  // Divisor permutations left implicit follow the vertex action, keeping
  // the listed order at each location.
  for (std::size_t k = 0; k < divisor_action.size(); ++k) {
    if (mentions_divisor[k] || divisors.empty()) continue;
    std::map<std::size_t, std::vector<std::size_t>> by_vertex;
    auto vertex_of = [&](const Divisor &d) {
      return d.at == Divisor::At::Node ? g.node_vertex(d.where) : d.where;
    };
    for (std::size_t i = 0; i < divisors.size(); ++i) by_vertex[vertex_of(divisors[i])].push_back(i);
    for (const auto &[v, list] : by_vertex) {
      const auto &target = by_vertex[vertex_action[k][v]];
      if (target.size() != list.size())
        throw ConfigIncompatible("divisor counts differ at " + g.vertex_id(v) + " and its image");
      for (std::size_t i = 0; i < list.size(); ++i) divisor_action[k][list[i]] = target[i];
    }
  }
  inst.divisors = DivisorConfig(g, std::move(divisors), std::move(divisor_action));

  if (doc.contains("ell")) inst.ell = detail::as_integer(doc["ell"], "/ell");
  if (doc.contains("q")) inst.q = detail::as_integer(doc["q"], "/q");
  if (doc.contains("precision")) inst.precision = static_cast<unsigned>(detail::as_int(doc["precision"], "/precision"));
  if (doc.contains("level")) inst.max_level = static_cast<unsigned>(detail::as_int(doc["level"], "/level"));

  if (doc.contains("jacobians")) {
    const JsonIn &jj = detail::as_array(doc["jacobians"], "/jacobians");
    for (std::size_t i = 0; i < jj.size(); ++i) {
      const std::string p = detail::at("/jacobians", i);
      JacobianDatum d;
      std::string rep = detail::as_string(detail::member(jj[i], "orbit_rep", p), p + "/orbit_rep");
      auto it = g.num_components() ? std::find_if(g.components().begin(), g.components().end(),
                                                  [&](const auto &c) { return c.id == rep; })
                                   : g.components().end();
      if (it == g.components().end()) detail::field_error(p + "/orbit_rep", "unknown component " + rep);
      d.orbit_rep = static_cast<std::size_t>(it - g.components().begin());
      std::vector<Integer> coeffs;
      const JsonIn &jp = detail::as_array(detail::member(jj[i], "charpoly", p), p + "/charpoly");
      for (std::size_t k = 0; k < jp.size(); ++k) coeffs.push_back(detail::as_integer(jp[k], detail::at(p + "/charpoly", k)));
      Integer qj = jj[i].contains("q") ? detail::as_integer(jj[i]["q"], p + "/q") : Integer(-1);
      long long f = jj[i].contains("f") ? detail::as_int(jj[i]["f"], p + "/f") : 1;
      if (f < 1) detail::field_error(p + "/f", "must be positive");
      d.f = static_cast<unsigned>(f);
      if (qj < 0) qj = ipow(inst.q, d.f);
      d.poly = CharPoly::from_descending(coeffs, qj);
      inst.jacobians.push_back(d);
    }
  }
  inst.validate();
  return inst;
}

inline SingularityInstance load_instance(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str(), path);
}

} // namespace devissage
