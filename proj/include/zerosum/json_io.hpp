#pragma once
// JSON and flat-text encodings for the algebra types.  JSON objects use
// sorted keys and integer values only, so serialized output is canonical
// and byte-stable across runs.

#include <sstream>
#include <string>

#include <json.hpp>

#include "zerosum/group.hpp"
#include "zerosum/sequence.hpp"

namespace zerosum {

using json = nlohmann::json;

inline json group_to_json(const GroupSpec& g) {
  return json{{"factors", g.factors()}};
}

inline GroupSpec group_from_json(const json& j) {
  if (!j.is_object() || !j.contains("factors") || !j["factors"].is_array())
    throw std::invalid_argument("group JSON needs a \"factors\" array");
  std::vector<int> f;
  for (const auto& v : j["factors"]) {
    if (!v.is_number_integer())
      throw std::invalid_argument("group factors must be integers");
    f.push_back(v.get<int>());
  }
  return make_group(f);
}

inline json element_to_json(const Element& e) {
  return json(e.residues());
}

inline Element element_from_json(const GroupSpec& g, const json& j) {
  if (!j.is_array() || j.size() != (std::size_t)g.rank())
    throw std::invalid_argument("element JSON must list one residue per factor");
  std::vector<int> res;
  for (const auto& v : j) {
    if (!v.is_number_integer())
      throw std::invalid_argument("element residues must be integers");
    res.push_back(v.get<int>());
  }
  return Element(g, g.index_of(res));
}

inline json hom_to_json(const Homomorphism& h) {
  json images = json::array();
  for (const Element& im : h.images()) images.push_back(element_to_json(im));
  return json{{"codomain", group_to_json(h.codomain())},
              {"domain", group_to_json(h.domain())},
              {"images", images}};
}

inline Homomorphism hom_from_json(const json& j) {
  if (!j.is_object() || !j.contains("domain") || !j.contains("codomain") ||
      !j.contains("images"))
    throw std::invalid_argument("homomorphism JSON needs domain, codomain, images");
  GroupSpec dom = group_from_json(j["domain"]);
  GroupSpec cod = group_from_json(j["codomain"]);
  if (!j["images"].is_array() || j["images"].size() != (std::size_t)dom.rank())
    throw std::invalid_argument("homomorphism JSON needs one image per generator");
  std::vector<Element> images;
  for (const auto& v : j["images"]) images.push_back(element_from_json(cod, v));
  return make_hom(dom, cod, images);
}

inline json sequence_to_json(const Sequence& s) {
  json elems = json::array();
  for (u32 idx : s.support())
    elems.push_back(json{{"elem", element_to_json(Element(s.group(), idx))},
                         {"mult", s.mult(idx)}});
  return json{{"elements", elems}, {"group", group_to_json(s.group())}};
}

inline Sequence sequence_from_json(const json& j) {
  if (!j.is_object() || !j.contains("group") || !j.contains("elements") ||
      !j["elements"].is_array())
    throw std::invalid_argument("sequence JSON needs group and elements");
  GroupSpec g = group_from_json(j["group"]);
  Sequence s(g);
  for (const auto& entry : j["elements"]) {
    if (!entry.is_object() || !entry.contains("elem") || !entry.contains("mult"))
      throw std::invalid_argument("sequence entries need elem and mult");
    u64 mult = entry["mult"].get<u64>();
    if (mult == 0) throw std::invalid_argument("sequence multiplicities must be positive");
    s.add(element_from_json(g, entry["elem"]), (u32)mult);
  }
  return s;
}

/* Flat text: one element per line as comma-separated residues, repeated per
   multiplicity.  '#' starts a comment; blank lines are skipped. */
inline std::string sequence_to_text(const Sequence& s) {
  std::string out;
  for (u32 idx : s.expand()) {
    std::vector<int> res = s.group().residues_of(idx);
    for (std::size_t i = 0; i < res.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(res[i]);
    }
    out += "\n";
  }
  return out;
}

inline Sequence sequence_from_text(const GroupSpec& g, const std::string& text) {
  Sequence s(g);
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::vector<int> res;
    std::string tok;
    std::istringstream fields(line);
    bool any = false;
    while (std::getline(fields, tok, ',')) {
      std::size_t b = tok.find_first_not_of(" \t\r");
      if (b == std::string::npos) {
        if (any) throw std::invalid_argument("line " + std::to_string(lineno) +
                                             ": empty residue field");
        continue;
      }
      std::size_t e = tok.find_last_not_of(" \t\r");
      try {
        std::size_t used = 0;
        std::string body = tok.substr(b, e - b + 1);
        res.push_back(std::stoi(body, &used));
        if (used != body.size()) throw std::invalid_argument("trailing junk");
      } catch (const std::exception&) {
        throw std::invalid_argument("line " + std::to_string(lineno) +
                                    ": bad residue '" + tok + "'");
      }
      any = true;
    }
    if (!any) continue;  // blank or comment-only line
    if (res.size() != (std::size_t)g.rank())
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(g.rank()) + " residues, got " +
                                  std::to_string(res.size()));
    s.add(g.index_of(res));
  }
  return s;
}

} // namespace zerosum
