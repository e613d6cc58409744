#include "liecycles/scene.hpp"

#include <cmath>
#include <map>
#include <set>

#include "liecycles/errors.hpp"
#include "liecycles/interplay.hpp"
#include "liecycles/subspaces.hpp"

namespace lie {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ParseError(path + ": " + msg);
}

const Json& need(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key))
    fail(path, std::string("missing \"") + key + "\"");
  return obj.at(key);
}

double need_number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::string need_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Eigen::VectorXd need_point(const Json& j, int n, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail(path, "expected an array of " + std::to_string(n) + " numbers");
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = need_number(j[i], path);
  return v;
}

Cycle parse_cycle(const Json& j, int n, const std::string& path) {
  if (!j.is_object() || j.size() != 1)
    fail(path, "expected exactly one of sphere/point/plane");
  if (j.contains("sphere")) {
    const Json& s = j.at("sphere");
    Sphere sphere;
    sphere.center = need_point(need(s, "center", path), n, path + "/sphere/center");
    sphere.radius = need_number(need(s, "radius", path), path + "/sphere/radius");
    if (!(sphere.radius > 0)) fail(path + "/sphere/radius", "must be > 0");
    sphere.orientation = 1;
    if (s.contains("orientation")) {
      const double o = need_number(s.at("orientation"), path + "/sphere/orientation");
      if (o != 1 && o != -1) fail(path + "/sphere/orientation", "must be 1 or -1");
      sphere.orientation = static_cast<int>(o);
    }
    return sphere;
  }
  if (j.contains("point")) {
    return Point{need_point(need(j.at("point"), "location", path), n,
                            path + "/point/location")};
  }
  if (j.contains("plane")) {
    const Json& p = j.at("plane");
    Eigen::VectorXd normal =
        need_point(need(p, "normal", path), n, path + "/plane/normal");
    Eigen::VectorXd through =
        need_point(need(p, "through", path), n, path + "/plane/through");
    const double len = normal.norm();
    if (len < 1e-12) fail(path + "/plane/normal", "must be nonzero");
    normal /= len;
    return Plane{normal, normal.dot(through)};
  }
  fail(path, "unknown cycle kind");
}

Special parse_special(const Json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "R") return Special::r();
    if (s == "W") return Special::w();
    fail(path, "special must be \"R\", \"W\" or {\"torus\": rho}");
  }
  if (j.is_object() && j.contains("torus"))
    return Special::torus(need_number(j.at("torus"), path + "/torus"));
  fail(path, "special must be \"R\", \"W\" or {\"torus\": rho}");
}

const std::set<std::string>& known_query_kinds() {
  static const std::set<std::string> kinds = {
      "pair_invariant", "apollonius",    "family_classify", "subcycle",
      "cone",           "family_discriminant", "family_cycle", "two_family",
      "eigenanalysis",  "steiner_pair",  "cone_pair"};
  return kinds;
}

}  // namespace

const Cycle* Scene::find_cycle(const std::string& id) const {
  for (const auto& [name, c] : cycles)
    if (name == id) return &c;
  return nullptr;
}

const FamilySpec* Scene::find_family(const std::string& id) const {
  for (const auto& [name, f] : families)
    if (name == id) return &f;
  return nullptr;
}

Scene parse_scene(const std::string& text) {
  // Track object keys during the parse so duplicated ids are rejected
  // instead of silently collapsed.
  std::vector<std::set<std::string>> key_stack;
  auto callback = [&key_stack](int, Json::parse_event_t event,
                               Json& parsed) -> bool {
    switch (event) {
      case Json::parse_event_t::object_start:
        key_stack.emplace_back();
        break;
      case Json::parse_event_t::object_end:
        key_stack.pop_back();
        break;
      case Json::parse_event_t::key: {
        const auto key = parsed.get<std::string>();
        if (!key_stack.back().insert(key).second)
          throw ParseError("duplicate key \"" + key + "\"");
        break;
      }
      default:
        break;
    }
    return true;
  };

  Json root;
  try {
    root = Json::parse(text, callback);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("/", "top level must be an object");

  Scene scene;
  const Json& dim = need(root, "dimension", "/");
  if (!dim.is_number_integer() || dim.get<int>() < 1)
    fail("/dimension", "must be an integer >= 1");
  scene.dimension = dim.get<int>();

  if (root.contains("cycles")) {
    const Json& cycles = root.at("cycles");
    if (!cycles.is_object()) fail("/cycles", "expected an object");
    for (const auto& [id, body] : cycles.items())
      scene.cycles.emplace_back(
          id, parse_cycle(body, scene.dimension, "/cycles/" + id));
  }

  if (root.contains("families")) {
    const Json& families = root.at("families");
    if (!families.is_object()) fail("/families", "expected an object");
    for (const auto& [id, body] : families.items()) {
      const std::string path = "/families/" + id;
      FamilySpec spec;
      const Json& spanning = need(body, "spanning", path);
      if (!spanning.is_array() || spanning.size() < 2)
        fail(path + "/spanning", "expected an array of at least 2 cycle ids");
      for (size_t i = 0; i < spanning.size(); ++i) {
        const std::string ref =
            need_string(spanning[i], path + "/spanning/" + std::to_string(i));
        if (!scene.find_cycle(ref))
          fail(path + "/spanning/" + std::to_string(i),
               "unknown cycle id \"" + ref + "\"");
        spec.spanning.push_back(ref);
      }
      const Special sp = parse_special(need(body, "special", path), path + "/special");
      spec.special = sp.kind;
      spec.torus_rho = sp.rho;
      scene.families.emplace_back(id, spec);
    }
  }

  if (root.contains("queries")) {
    const Json& queries = root.at("queries");
    if (!queries.is_array()) fail("/queries", "expected an array");
    for (size_t i = 0; i < queries.size(); ++i) {
      const std::string path = "/queries/" + std::to_string(i);
      const Json& q = queries[i];
      Query query;
      query.kind = need_string(need(q, "kind", path), path + "/kind");
      if (!known_query_kinds().count(query.kind))
        fail(path + "/kind", "unknown query kind \"" + query.kind + "\"");
      query.args = q.contains("args") ? nlohmann::json(q.at("args"))
                                      : nlohmann::json::object();
      scene.queries.push_back(std::move(query));
    }
  }
  return scene;
}

// ---- report assembly -------------------------------------------------------

namespace {

Json vec_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Json cycle_json(const Cycle& c) {
  Json out;
  if (const auto* s = std::get_if<Sphere>(&c)) {
    out["sphere"] = {{"center", vec_json(s->center)},
                     {"radius", s->radius},
                     {"orientation", s->orientation}};
  } else if (const auto* p = std::get_if<Point>(&c)) {
    out["point"] = {{"location", vec_json(p->location)}};
  } else if (const auto* pl = std::get_if<Plane>(&c)) {
    out["plane"] = {{"normal", vec_json(pl->normal)}, {"support", pl->support}};
  } else {
    out["improper_w"] = Json::object();
  }
  return out;
}

double quadric_residual(const Vec& x) {
  return std::abs(product(x, x)) / x.squaredNorm();
}

// Per-query evaluation context.
struct Runner {
  const Scene& scene;
  const Tolerances& tol;
  std::map<std::string, Family> family_cache;

  Vec cycle_vec(const nlohmann::json& args, const char* key) {
    if (!args.contains(key) || !args.at(key).is_string())
      throw InvalidInput(std::string("query needs a cycle id in \"") + key + "\"");
    const std::string id = args.at(key).get<std::string>();
    const Cycle* c = scene.find_cycle(id);
    if (!c) throw InvalidInput("unknown cycle id \"" + id + "\"");
    return encode(*c);
  }

  const Family& family(const nlohmann::json& args, const char* key) {
    if (!args.contains(key) || !args.at(key).is_string())
      throw InvalidInput(std::string("query needs a family id in \"") + key + "\"");
    const std::string id = args.at(key).get<std::string>();
    auto it = family_cache.find(id);
    if (it != family_cache.end()) return it->second;
    const FamilySpec* spec = scene.find_family(id);
    if (!spec) throw InvalidInput("unknown family id \"" + id + "\"");
    std::vector<Cycle> cycles;
    for (const std::string& ref : spec->spanning)
      cycles.push_back(*scene.find_cycle(ref));
    Family f = make_family(cycles, Special{spec->special, spec->torus_rho}, tol);
    return family_cache.emplace(id, std::move(f)).first->second;
  }

  Json run(const Query& q);
};

const char* class_name(FamilyClass c) {
  switch (c) {
    case FamilyClass::Hyperbolic: return "hyperbolic";
    case FamilyClass::Parabolic: return "parabolic";
    case FamilyClass::Elliptic: return "elliptic";
  }
  return "?";
}

const char* contact_name(Contact c) {
  switch (c) {
    case Contact::OrientedContact: return "oriented_contact";
    case Contact::Intersecting: return "intersecting";
    case Contact::Disjoint: return "disjoint";
    case Contact::CommonTangent: return "common_tangent";
    case Contact::NoCommonTangent: return "no_common_tangent";
    case Contact::IncidentPoint: return "incident_point";
  }
  return "?";
}

const char* pair_class_name(PairClass c) {
  switch (c) {
    case PairClass::Intersect: return "intersect";
    case PairClass::Linked: return "linked";
    case PairClass::Unlinked: return "unlinked";
    case PairClass::SharedStructure: return "shared_structure";
    case PairClass::DistanceExists: return "distance_exists";
    case PairClass::NoDistance: return "no_distance";
  }
  return "?";
}

Json extremal_pairs_json(const std::vector<ExtremalPair>& pairs) {
  Json arr = Json::array();
  for (const ExtremalPair& p : pairs)
    arr.push_back({{"x", cycle_json(p.x)}, {"y", cycle_json(p.y)}, {"value", p.value}});
  return arr;
}

Json Runner::run(const Query& q) {
  Json data;
  if (q.kind == "pair_invariant") {
    const Vec x = cycle_vec(q.args, "x"), y = cycle_vec(q.args, "y");
    PairInvariant inv = pair_invariant(x, y, tol);
    data["kind"] = contact_name(inv.kind);
    if (inv.angle) data["angle"] = *inv.angle;
    if (inv.cosh_boost) data["cosh_boost"] = *inv.cosh_boost;
    if (inv.boost_sign) data["boost_sign"] = *inv.boost_sign;
    if (inv.tangent_distance) data["tangent_distance"] = *inv.tangent_distance;
    if (inv.half_chord) data["half_chord"] = *inv.half_chord;
    if (inv.product_r) data["product_r"] = *inv.product_r;
    if (inv.product_w) data["product_w"] = *inv.product_w;
    data["residuals"] = {{"on_quadric_x", quadric_residual(x)},
                         {"on_quadric_y", quadric_residual(y)}};
  } else if (q.kind == "apollonius") {
    if (!q.args.contains("cycles") || !q.args.at("cycles").is_array())
      throw InvalidInput("apollonius query needs a \"cycles\" id array");
    std::vector<Vec> inputs;
    for (const auto& idj : q.args.at("cycles")) {
      if (!idj.is_string()) throw InvalidInput("apollonius cycle ids must be strings");
      const Cycle* c = scene.find_cycle(idj.get<std::string>());
      if (!c) throw InvalidInput("unknown cycle id \"" + idj.get<std::string>() + "\"");
      inputs.push_back(encode(*c));
    }
    std::vector<Vec> sols = apollonius(inputs, tol);
    data["count"] = sols.size();
    Json arr = Json::array();
    double worst = 0;
    for (const Vec& z : sols) {
      arr.push_back(cycle_json(decode(z, tol)));
      for (const Vec& x : inputs)
        worst = std::max(worst, std::abs(product(z, x)) / product_scale(z, x));
    }
    data["solutions"] = arr;
    data["residuals"] = {{"max_tangency", worst}};
  } else if (q.kind == "family_classify") {
    const Family& f = family(q.args, "family");
    data["class"] = class_name(f.cls);
    data["k"] = f.k();
    data["gram_det_normalized"] = gram_det_normalized(f.subspace());
  } else if (q.kind == "subcycle") {
    const Family& f = family(q.args, "family");
    SubcycleGeometry geo = subcycle_geometry(f, tol);
    data["delta_w"] = geo.delta_w;
    data["all_planes"] = geo.all_planes;
    if (geo.radius) data["radius"] = *geo.radius;
    if (geo.center) data["center"] = vec_json(*geo.center);
    Json spheres = Json::array();
    for (const Sphere& s : geo.min_spheres) spheres.push_back(cycle_json(s));
    data["min_spheres"] = spheres;
    Json carrier = Json::array();
    for (const Plane& p : geo.carrier) carrier.push_back(cycle_json(p));
    data["carrier"] = carrier;
    if (geo.radius)
      data["residuals"] = {
          {"radius_identity",
           std::abs(*geo.radius * *geo.radius * std::abs(geo.delta_w) - 1.0)}};
  } else if (q.kind == "cone") {
    const Family& f = family(q.args, "family");
    ConeGeometry geo = cone_geometry(f, tol);
    data["delta_r"] = geo.delta_r;
    data["half_angle"] = geo.half_angle;
    Json planes = Json::array();
    for (const Plane& p : geo.axis_plane) planes.push_back(cycle_json(p));
    data["axis_plane"] = planes;
    Json apex = Json::array();
    for (const Point& p : geo.apex_set) apex.push_back(cycle_json(p));
    data["apex_set"] = apex;
    const double c = std::cos(geo.half_angle);
    data["residuals"] = {{"angle_identity", std::abs(geo.delta_r + 1.0 / (c * c))}};
  } else if (q.kind == "family_discriminant") {
    const Family& f = family(q.args, "family");
    if (!q.args.contains("sprime"))
      throw InvalidInput("family_discriminant query needs \"sprime\"");
    const Special sp = parse_special(Json(q.args.at("sprime")), "sprime");
    const Vec sprime = sp.vector(f.dimension());
    const double delta = s_discriminant(f, sprime, tol);
    FamilyFrame frame = family_frame(f, sprime, tol);
    data["delta"] = delta;
    data["center_is_zero"] = frame.center_is_zero;
    data["residuals"] = {{"frame_identity", std::abs(delta - frame.discriminant)}};
  } else if (q.kind == "family_cycle") {
    const Family& f = family(q.args, "family");
    const Vec y = cycle_vec(q.args, "cycle");
    const double delta = family_cycle_discriminant(f, y, tol);
    CriticalProjection crit = critical_projection(f, y, tol);
    data["delta"] = delta;
    data["h_at_projection"] = crit.h_at_projection;
    if (crit.second_value) data["second_value"] = *crit.second_value;
    data["residuals"] = {{"projection_gap", std::abs(delta - crit.h_at_projection)}};
  } else if (q.kind == "two_family") {
    const Family& fx = family(q.args, "x");
    const Family& fy = family(q.args, "y");
    data["delta"] = two_family_discriminant(fx, fy, tol);
    data["residuals"] = {
        {"symmetry_gap", std::abs(two_family_discriminant(fy, fx, tol) -
                                  data["delta"].get<double>())}};
  } else if (q.kind == "eigenanalysis") {
    const Family& fx = family(q.args, "x");
    const Family& fy = family(q.args, "y");
    EigenAnalysis eig = projector_eigenanalysis(fx, fy, tol);
    data["eigenvalues"] = eig.eigenvalues;
    data["degenerate"] = eig.degenerate;
    if (eig.t_hat && eig.u_hat)
      data["fixed_product"] = product(*eig.t_hat, *eig.u_hat);
    double pairing = 0, cross = 0;
    for (size_t i = 0; i < eig.eigenvalues.size(); ++i) {
      if (eig.eigenvalues[i] >= 0)
        pairing = std::max(pairing,
                           std::abs(product(eig.e[i], eig.f[i]) -
                                    std::sqrt(eig.eigenvalues[i])));
      for (size_t j = 0; j < eig.eigenvalues.size(); ++j)
        if (i != j)
          cross = std::max(cross, std::abs(product(eig.e[i], eig.f[j])));
    }
    data["residuals"] = {{"pairing_gap", pairing}, {"cross_gap", cross}};
  } else if (q.kind == "steiner_pair") {
    const Family& fx = family(q.args, "x");
    const Family& fy = family(q.args, "y");
    PairReport report = steiner_pair_report(fx, fy, tol);
    data["delta"] = report.discriminant;
    data["classification"] = pair_class_name(report.classification);
    data["extremal_pairs"] = extremal_pairs_json(report.extremal_pairs);
    if (report.classification == PairClass::Linked) {
      EigenAnalysis eig = projector_eigenanalysis(fx, fy, tol);
      double prod = 1;
      for (double lam : eig.eigenvalues) prod *= 1.0 - lam;
      data["residuals"] = {{"eigen_identity_gap",
                            std::abs(report.discriminant + prod)}};
    }
  } else if (q.kind == "cone_pair") {
    const Family& fx = family(q.args, "x");
    const Family& fy = family(q.args, "y");
    PairReport report = cone_pair_report(fx, fy, tol);
    data["delta"] = report.discriminant;
    data["classification"] = pair_class_name(report.classification);
    if (report.min_distance) data["min_distance"] = *report.min_distance;
    data["extremal_pairs"] = extremal_pairs_json(report.extremal_pairs);
    if (report.classification == PairClass::DistanceExists) {
      EigenAnalysis eig = projector_eigenanalysis(fx, fy, tol);
      double prod = 1;
      for (double lam : eig.eigenvalues) prod *= 1.0 - lam;
      const double tu = product(*eig.t_hat, *eig.u_hat);
      data["residuals"] = {{"eigen_identity_gap",
                            std::abs(report.discriminant - 2 * tu * prod)}};
    }
  } else {
    throw Unsupported("unknown query kind \"" + q.kind + "\"");
  }
  return data;
}

}  // namespace

Report run_queries(const Scene& scene, const Tolerances& tol) {
  Report report;
  report["schema_version"] = "1";
  report["results"] = Json::array();
  Runner runner{scene, tol, {}};
  for (size_t i = 0; i < scene.queries.size(); ++i) {
    Json entry;
    entry["query_index"] = i;
    entry["kind"] = scene.queries[i].kind;
    entry["ok"] = false;
    try {
      Json data = runner.run(scene.queries[i]);
      entry["ok"] = true;
      entry["data"] = std::move(data);
    } catch (const Error& e) {
      entry["error"] = {{"kind", e.kind()}, {"message", e.what()}};
    } catch (const std::exception& e) {
      entry["error"] = {{"kind", "InternalError"}, {"message", e.what()}};
    }
    report["results"].push_back(std::move(entry));
  }
  return report;
}

}  // namespace lie
