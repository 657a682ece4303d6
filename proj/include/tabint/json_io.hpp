#pragma once

// JSON (de)serialization for frames, logics, models, encodings and verdicts.
// Frame JSON: {"worlds":[...], "edges":[[w,w'],...], "root":w, "name"?:s}
// Logic JSON: {"name":s, "normal":bool, "frames":[frame,...]}
// Model JSON: frame fields plus {"valuation": {w:[atom,...]}}

#include <json.hpp>

#include "tabint/cover.hpp"
#include "tabint/interpolation.hpp"

namespace tabint {

using nlohmann::json;

inline Atom atom_from_text(const std::string& text) {
  auto at = text.find('@');
  if (at == std::string::npos) return Atom::plain(text);
  std::string head = text.substr(0, at);
  std::string tail = text.substr(at + 1);
  auto colon = tail.find(':');
  if (colon == std::string::npos) return Atom::indexed(head, tail);
  return Atom::selector(tail.substr(0, colon), tail.substr(colon + 1));
}

inline json frame_to_json(const PointedFrame& fr) {
  json j;
  if (!fr.name().empty()) j["name"] = fr.name();
  j["worlds"] = fr.worlds();
  json edges = json::array();
  for (const auto& [a, b] : fr.edges()) edges.push_back(json::array({a, b}));
  j["edges"] = std::move(edges);
  j["root"] = fr.root();
  return j;
}

inline PointedFrame frame_from_json(const json& j) {
  std::vector<WorldId> worlds = j.at("worlds").get<std::vector<WorldId>>();
  std::vector<std::pair<WorldId, WorldId>> edges;
  for (const auto& e : j.at("edges"))
    edges.emplace_back(e.at(0).get<WorldId>(), e.at(1).get<WorldId>());
  std::string name = j.value("name", "");
  return PointedFrame(name, std::move(worlds), std::move(edges),
                      j.at("root").get<WorldId>());
}

inline json logic_to_json(const Logic& logic) {
  json j;
  j["name"] = logic.name();
  j["normal"] = logic.normal();
  json frames = json::array();
  for (const PointedFrame& fr : logic.frames()) frames.push_back(frame_to_json(fr));
  j["frames"] = std::move(frames);
  return j;
}

inline Logic logic_from_json(const json& j) {
  std::vector<PointedFrame> frames;
  for (const auto& fj : j.at("frames")) frames.push_back(frame_from_json(fj));
  return Logic(j.value("name", "logic"), std::move(frames), j.value("normal", false));
}

inline json model_to_json(const Model& m) {
  json j = frame_to_json(m.frame());
  json val = json::object();
  for (size_t w = 0; w < m.frame().size(); ++w) {
    json atoms = json::array();
    for (const Atom& a : m.valuation(static_cast<int>(w))) atoms.push_back(a.text());
    val[m.frame().worlds()[w]] = std::move(atoms);
  }
  j["valuation"] = std::move(val);
  return j;
}

inline Model model_from_json(const json& j) {
  PointedFrame fr = frame_from_json(j);
  std::map<WorldId, Signature> valuation;
  if (j.contains("valuation")) {
    for (auto it = j.at("valuation").begin(); it != j.at("valuation").end(); ++it) {
      Signature atoms;
      for (const auto& a : it.value()) atoms.insert(atom_from_text(a.get<std::string>()));
      valuation[it.key()] = std::move(atoms);
    }
  }
  return Model(fr, valuation);
}

inline json encoding_to_json(const Encoding& enc) {
  json j;
  json sigma = json::array();
  for (const Atom& a : enc.sigma) sigma.push_back(a.text());
  j["sigma"] = std::move(sigma);
  j["N"] = enc.N;
  json entries = json::array();
  for (const EncodingEntry& e : enc.entries) {
    json entry;
    json members = json::array();
    for (Formula m : e.phi.members) members.push_back(render(m));
    entry["members"] = std::move(members);
    json classes = json::array();
    for (const EncodingClass& c : e.classes) {
      json cls;
      cls["identifier"] = render(c.delta);
      cls["size"] = c.members.size();
      json reps = json::array();
      for (const auto& [fi, labels] : c.members) {
        json rep;
        rep["frame"] = fi;
        rep["labels"] = labels;
        reps.push_back(std::move(rep));
      }
      cls["models"] = std::move(reps);
      classes.push_back(std::move(cls));
    }
    entry["classes"] = std::move(classes);
    entries.push_back(std::move(entry));
  }
  j["covers"] = std::move(entries);
  return j;
}

inline json verdict_to_json(const Verdict& v) {
  json j;
  j["holds"] = v.holds;
  if (!v.detail.empty()) j["detail"] = v.detail;
  if (v.witness_model) j["witness_model"] = model_to_json(*v.witness_model);
  if (v.witness_formula) j["witness_formula"] = render(*v.witness_formula);
  return j;
}

}  // namespace tabint
