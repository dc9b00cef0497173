#include <nlohmann/json.hpp>

#include "dehnvol/complex.hpp"

namespace dehnvol {

using nlohmann::json;

namespace {
constexpr int kFormatVersion = 1;
}

std::string save_complex(const TruncatedComplex& cx) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["name"] = cx.name();
  json tets = json::array();
  for (int t = 0; t < cx.size(); ++t)
    tets.push_back({{"index", t}, {"orientation", cx.orientation(t)}});
  doc["tetrahedra"] = tets;
  json glu = json::array();
  for (int t = 0; t < cx.size(); ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& g = cx.gluing(t, f);
      glu.push_back({{"tet", g.tet},
                     {"face", g.face},
                     {"nbr_tet", g.nbr_tet},
                     {"nbr_face", g.nbr_face},
                     {"perm", g.perm}});
    }
  doc["face_gluings"] = glu;
  json cusps = json::array();
  for (int j = 0; j < cx.num_cusps(); ++j) {
    const auto& cd = cx.cusp(j);
    auto signed_ids = [](const PeripheralCurve& p) {
      std::vector<int> out;
      for (auto [e, d] : p) out.push_back(d * (e + 1));
      return out;
    };
    cusps.push_back({{"index", j},
                     {"meridian", signed_ids(cd.meridian)},
                     {"longitude", signed_ids(cd.longitude)}});
  }
  doc["cusps"] = cusps;
  if (cx.has_template()) {
    json tpl = json::object();
    for (int e = 0; e < cx.num_short_orbits(); ++e)
      tpl[std::to_string(e + 1)] = cx.sigma_template().values[e].str();
    doc["sigma_template"] = tpl;
  }
  if (!cx.short_edge_labels().empty()) {
    json labels = json::object();
    for (const auto& [lb, sid] : cx.short_edge_labels()) labels[lb] = sid;
    doc["short_edge_labels"] = labels;
  }
  // redundant but human-checkable; validated on load
  json classes = json::array();
  for (int c = 0; c < cx.num_edge_classes(); ++c) {
    json members = json::array();
    for (auto [t, e] : cx.class_members(c)) {
      auto [i, j] = edge_vertices(e);
      members.push_back({t, i, j});
    }
    classes.push_back({{"id", c}, {"members", members}});
  }
  doc["long_edge_classes"] = classes;
  return doc.dump(2) + "\n";
}

TruncatedComplex load_complex(const std::string& bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::exception& e) {
    throw complex_error(std::string("malformed triangulation document: ") +
                        e.what());
  }
  if (!doc.contains("format_version") || !doc["format_version"].is_number_integer())
    throw complex_error("missing format_version");
  if (doc["format_version"].get<int>() != kFormatVersion)
    throw complex_error("unsupported format_version " +
                        doc["format_version"].dump());

  FacePairingData fp;
  if (!doc.contains("tetrahedra") || !doc["tetrahedra"].is_array())
    throw complex_error("missing tetrahedra");
  fp.tetrahedron_count = int(doc["tetrahedra"].size());
  std::vector<int> eps(fp.tetrahedron_count, 0);
  for (const auto& t : doc["tetrahedra"]) {
    int idx = t.at("index").get<int>();
    if (idx < 0 || idx >= fp.tetrahedron_count)
      throw complex_error("tetrahedron index out of range");
    eps[idx] = t.value("orientation", 1);
  }
  for (const auto& g : doc.at("face_gluings")) {
    FaceGluing fg;
    fg.tet = g.at("tet").get<int>();
    fg.face = g.at("face").get<int>();
    fg.nbr_tet = g.at("nbr_tet").get<int>();
    fg.nbr_face = g.at("nbr_face").get<int>();
    auto perm = g.at("perm");
    if (!perm.is_array() || perm.size() != 4)
      throw complex_error("gluing perm must have 4 entries");
    for (int i = 0; i < 4; ++i) fg.perm[i] = perm[i].get<int>();
    fp.gluings.push_back(fg);
  }
  std::vector<std::pair<PeripheralCurve, PeripheralCurve>> peri;
  auto to_curve = [](const json& arr) {
    PeripheralCurve p;
    for (const auto& v : arr) {
      int sid = v.get<int>();
      if (sid == 0) throw complex_error("short-edge id 0 is invalid");
      p.push_back({std::abs(sid) - 1, sid > 0 ? +1 : -1});
    }
    return p;
  };
  for (const auto& cj : doc.at("cusps")) {
    peri.push_back({to_curve(cj.at("meridian")), to_curve(cj.at("longitude"))});
  }
  auto cx = build_complex(fp, peri, eps, doc.value("name", ""));

  SigmaTemplate tpl;
  std::vector<std::pair<std::string, int>> labels;
  if (doc.contains("sigma_template")) {
    tpl.values.assign(cx.num_short_orbits(), Monomial(cx.num_cusps()));
    std::vector<bool> seen(cx.num_short_orbits(), false);
    for (auto& [key, val] : doc["sigma_template"].items()) {
      int id = std::stoi(key);
      if (id < 1 || id > cx.num_short_orbits())
        throw complex_error("sigma_template references unknown short edge");
      tpl.values[id - 1] = Monomial::parse(val.get<std::string>(), cx.num_cusps());
      seen[id - 1] = true;
    }
    for (bool s : seen)
      if (!s) throw complex_error("sigma_template misses a short edge");
  }
  if (doc.contains("short_edge_labels"))
    for (auto& [lb, sid] : doc["short_edge_labels"].items())
      labels.push_back({lb, sid.get<int>()});
  attach_template(cx, std::move(tpl), std::move(labels));

  if (doc.contains("long_edge_classes")) {
    const auto& classes = doc["long_edge_classes"];
    std::vector<bool> seen(cx.num_edge_classes(), false);
    if (int(classes.size()) != cx.num_edge_classes())
      throw complex_error("long_edge_classes count mismatch");
    for (const auto& cj : classes) {
      int id = cj.at("id").get<int>();
      if (id < 0 || id >= cx.num_edge_classes() || seen[id])
        throw complex_error("duplicate or invalid long-edge class id");
      seen[id] = true;
      for (const auto& m : cj.at("members")) {
        int t = m.at(0).get<int>(), i = m.at(1).get<int>(), j = m.at(2).get<int>();
        if (t < 0 || t >= cx.size() || i < 0 || i > 3 || j < 0 || j > 3 || i == j)
          throw complex_error("long-edge class member out of range");
        if (cx.edge_class(t, i, j) != id)
          throw complex_error("long-edge classes inconsistent with gluing");
      }
    }
  }
  return cx;
}

}  // namespace dehnvol
