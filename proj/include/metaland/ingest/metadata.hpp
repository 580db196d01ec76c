#pragma once

#include <cmath>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "metaland/core/types.hpp"
#include "metaland/ingest/json_fields.hpp"

namespace metaland {

struct Erc721Attribute {
  std::string trait_type;
  nlohmann::json value;  // scalar: string, number or boolean
};

/// ERC721 metadata document. `token_id` is a top-level extension member the
/// fixture documents carry so a document can be mapped to its token.
struct Erc721Metadata {
  std::optional<TokenId> token_id;
  std::string name;
  std::string description;
  std::string image;
  std::vector<Erc721Attribute> attributes;

  const Erc721Attribute* find(std::string_view trait) const {
    if (trait.empty()) return nullptr;
    for (const auto& a : attributes)
      if (a.trait_type == trait) return &a;
    return nullptr;
  }
};

inline Erc721Metadata parse_erc721(const nlohmann::json& doc) {
  using namespace json_fields;
  constexpr std::string_view ctx = "metadata";
  if (!doc.is_object()) throw ParseError("metadata: document must be an object");
  Erc721Metadata md;
  if (has(doc, "token_id")) md.token_id = get_uint(doc, "token_id", ctx);
  if (has(doc, "name")) md.name = get_string(doc, "name", ctx);
  if (has(doc, "description")) md.description = get_string(doc, "description", ctx);
  if (has(doc, "image")) md.image = get_string(doc, "image", ctx);
  if (has(doc, "attributes")) {
    const auto& attrs = doc["attributes"];
    if (!attrs.is_array()) throw ParseError("metadata: attributes must be an array");
    std::set<std::string> seen;
    for (const auto& a : attrs) {
      Erc721Attribute attr{get_string(a, "trait_type", ctx), require(a, "value", ctx)};
      if (!attr.value.is_primitive()) throw ParseError("metadata: trait '" + attr.trait_type + "' value must be scalar");
      if (!seen.insert(attr.trait_type).second)
        throw ParseError("metadata: duplicate trait_type '" + attr.trait_type + "'");
      md.attributes.push_back(std::move(attr));
    }
  }
  return md;
}

namespace detail {

inline double trait_number(const Erc721Attribute& a) {
  if (a.value.is_number()) return a.value.get<double>();
  if (a.value.is_string()) {
    const auto s = a.value.get<std::string>();
    try {
      std::size_t used = 0;
      const double d = std::stod(s, &used);
      if (used == s.size()) return d;
    } catch (const std::exception&) {
    }
  }
  throw ParseError("metadata: trait '" + a.trait_type + "' must be numeric");
}

inline int trait_int(const Erc721Attribute& a) {
  const double d = trait_number(a);
  if (d != std::floor(d) || std::fabs(d) > 1e9) throw ParseError("metadata: trait '" + a.trait_type + "' must be an integer");
  return static_cast<int>(d);
}

inline std::string trait_text(const Erc721Attribute& a) {
  if (a.value.is_string()) return a.value.get<std::string>();
  return a.value.dump();
}

inline bool trait_flag(const Erc721Attribute& a) {
  if (a.value.is_boolean()) return a.value.get<bool>();
  if (a.value.is_number()) return a.value.get<double>() != 0.0;
  const auto s = trait_text(a);
  if (s == "Yes" || s == "yes" || s == "true" || s == "1") return true;
  if (s == "No" || s == "no" || s == "false" || s == "0" || s.empty()) return false;
  throw ParseError("metadata: trait '" + a.trait_type + "' must be a flag");
}

}  // namespace detail

/// Maps an ERC721 metadata document onto a Parcel using the platform's
/// profile-configured trait names. Unmapped traits land in
/// `extra_attributes`.
inline Parcel parse_parcel_metadata(PlatformId platform, const Erc721Metadata& md) {
  const PlatformProfile& prof = profile(platform);
  const AttributeNames& names = prof.attributes;
  if (!md.token_id) throw ParseError("metadata: missing token_id");

  Parcel p;
  p.platform = platform;
  p.token_id = *md.token_id;
  const auto* ax = md.find(names.x);
  const auto* ay = md.find(names.y);
  if (!ax || !ay) throw ParseError("metadata: token " + std::to_string(p.token_id) + " missing x/y coordinates");
  p.x = detail::trait_int(*ax);
  p.y = detail::trait_int(*ay);

  std::set<std::string_view> mapped{names.x, names.y};
  if (const auto* a = md.find(names.poi_distance)) {
    p.distance_to_nearest_poi = detail::trait_number(*a);
    if (!(*p.distance_to_nearest_poi >= 0.0)) throw DataError("metadata: negative POI distance");
    mapped.insert(names.poi_distance);
  }
  if (const auto* a = md.find(names.estate)) {
    p.estate_id = detail::trait_text(*a);
    mapped.insert(names.estate);
  }

  const std::string who = "metadata: token " + std::to_string(p.token_id) + ": ";
  switch (prof.geometry) {
    case GeometryKind::fixed_square:
      p.geometry = FixedSquare{*prof.fixed_side_m};
      break;
    case GeometryKind::voxels_box: {
      const auto* area = md.find(names.area);
      const auto* height = md.find(names.height);
      if (!area || !height) throw ParseError(who + "missing area/height");
      VoxelsBox box{detail::trait_number(*area), detail::trait_number(*height)};
      if (!(box.area_m2 > 0.0) || !(box.height_m > 0.0)) throw DataError(who + "voxels area and height must be positive");
      p.geometry = box;
      mapped.insert(names.area);
      mapped.insert(names.height);
      break;
    }
    case GeometryKind::somnium_class: {
      const auto* size = md.find(names.size_class);
      if (!size) throw ParseError(who + "missing size class");
      const SomniumClass cls = parse_somnium_class(detail::trait_text(*size));
      p.geometry = SomniumPlot{cls, somnium_volume_m3(cls)};
      mapped.insert(names.size_class);
      break;
    }
    case GeometryKind::otherside_traits: {
      const auto* sediment = md.find(names.sediment);
      if (!sediment) throw ParseError(who + "missing sediment");
      const auto* artifact = md.find(names.artifact);
      const auto* koda = md.find(names.koda);
      p.geometry = OthersideTraits{detail::trait_text(*sediment), artifact ? detail::trait_text(*artifact) : "None",
                                   koda ? detail::trait_flag(*koda) : false};
      mapped.insert(names.sediment);
      mapped.insert(names.artifact);
      mapped.insert(names.koda);
      break;
    }
  }

  for (const auto& a : md.attributes)
    if (!mapped.count(a.trait_type)) p.extra_attributes.emplace(a.trait_type, detail::trait_text(a));
  return p;
}

inline Parcel parse_parcel_metadata(PlatformId platform, std::string_view document) {
  try {
    return parse_parcel_metadata(platform, parse_erc721(json_fields::parse_document(document, "metadata")));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("metadata: ") + e.what());
  }
}

/// Inverse of parse_parcel_metadata: renders a parcel as an ERC721 document.
inline nlohmann::json parcel_to_metadata(const Parcel& p) {
  const PlatformProfile& prof = profile(p.platform);
  const AttributeNames& names = prof.attributes;
  nlohmann::json attrs = nlohmann::json::array();
  auto add = [&](std::string_view trait, nlohmann::json value) {
    attrs.push_back({{"trait_type", trait}, {"value", std::move(value)}});
  };
  add(names.x, p.x);
  add(names.y, p.y);
  if (p.distance_to_nearest_poi && !names.poi_distance.empty()) add(names.poi_distance, *p.distance_to_nearest_poi);
  if (p.estate_id && !names.estate.empty()) add(names.estate, *p.estate_id);
  if (const auto* box = std::get_if<VoxelsBox>(&p.geometry)) {
    add(names.area, box->area_m2);
    add(names.height, box->height_m);
  } else if (const auto* som = std::get_if<SomniumPlot>(&p.geometry)) {
    add(names.size_class, to_string(som->size_class));
  } else if (const auto* os = std::get_if<OthersideTraits>(&p.geometry)) {
    add(names.sediment, os->sediment);
    add(names.artifact, os->artifact);
    add(names.koda, os->has_koda ? "Yes" : "No");
  }
  for (const auto& [k, v] : p.extra_attributes) add(k, v);
  return {{"token_id", p.token_id},
          {"name", std::string(to_string(p.platform)) + " parcel " + std::to_string(p.x) + "," + std::to_string(p.y)},
          {"description", "Land parcel"},
          {"image", "https://example.invalid/" + std::string(to_string(p.platform)) + "/" + std::to_string(p.token_id) + ".png"},
          {"attributes", std::move(attrs)}};
}

}  // namespace metaland
