#include "msk/scenario.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "msk/error.hpp"
#include "msk/sampling.hpp"
#include "msk/scalar_parse.hpp"

namespace msk {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void scenario_error(const std::string& what) { throw Error(ErrorKind::ScenarioError, what); }

std::string bare(const Error& e) {
  std::string w = e.what();
  std::string prefix = std::string(to_string(e.kind())) + ": ";
  return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
}

// Grammar failures inside a payload string keep their kind and gain the object context.
template <class Fn>
auto payload(const std::string& context, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), context + ": " + bare(e));
  }
}

enum class Kind { Scalar, Form, Multivector, Map, Frame, Algebroid, IMForm, Groupoid, CE };

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Scalar: return "scalar";
    case Kind::Form: return "form";
    case Kind::Multivector: return "multivector";
    case Kind::Map: return "map";
    case Kind::Frame: return "frame";
    case Kind::Algebroid: return "algebroid";
    case Kind::IMForm: return "im-form";
    case Kind::Groupoid: return "groupoid";
    case Kind::CE: return "ce-algebra";
  }
  return "?";
}

Kind kind_of(const ObjectValue& v) {
  switch (v.index()) {
    case 0: return std::get<DiffForm>(v).degree() == 0 ? Kind::Scalar : Kind::Form;
    case 1: return Kind::Multivector;
    case 2: return Kind::Map;
    case 3: return Kind::Frame;
    case 4: return Kind::Algebroid;
    case 5: return Kind::IMForm;
    case 6: return Kind::Groupoid;
    default: return Kind::CE;
  }
}

// ---------------------------------------------------------------- serialization

class ChartNames {
 public:
  std::string add(const ChartPtr& c) {
    for (const auto& [chart, name] : entries_)
      if (same_chart(chart, c) && chart->name() == c->name()) return name;
    std::string name = c->name();
    for (int i = 2; taken(name); ++i) name = c->name() + "_" + std::to_string(i);
    entries_.emplace_back(c, name);
    return name;
  }
  const std::vector<std::pair<ChartPtr, std::string>>& entries() const { return entries_; }

 private:
  bool taken(const std::string& n) const {
    for (const auto& e : entries_)
      if (e.second == n) return true;
    return false;
  }
  std::vector<std::pair<ChartPtr, std::string>> entries_;
};

json scalars(const std::vector<RationalFunction>& fs) {
  json out = json::array();
  for (const auto& f : fs) out.push_back(format_scalar(f));
  return out;
}

json structure_json(const LieAlgebroid::Structure& c) {
  json out = json::array();
  for (std::size_t l = 0; l < c.size(); ++l)
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j)
        if (!c[l][i][j].is_zero())
          out.push_back(json{{"l", l + 1}, {"i", i + 1}, {"j", j + 1}, {"value", format_scalar(c[l][i][j])}});
  return out;
}

json map_json(const SmoothMap& m, ChartNames& charts) {
  return json{{"source", charts.add(m.source)}, {"target", charts.add(m.target)}, {"components", scalars(m.components)}};
}

json algebroid_json(const LieAlgebroid& A, ChartNames& charts) {
  json anchor = json::array();
  for (std::size_t i = 0; i < A.rank(); ++i) anchor.push_back(format_multivector(A.anchor_of(i)));
  return json{{"kind", "algebroid"},
              {"chart", charts.add(A.chart())},
              {"rank", A.rank()},
              {"anchor", anchor},
              {"structure", structure_json(A.structure())}};
}

json object_json(const ObjectValue& v, ChartNames& charts) {
  json o;
  switch (kind_of(v)) {
    case Kind::Scalar: {
      const auto& f = std::get<DiffForm>(v);
      o = json{{"kind", "scalar"}, {"chart", charts.add(f.chart())}, {"value", format_scalar(f.coeff({}))}};
      break;
    }
    case Kind::Form: {
      const auto& f = std::get<DiffForm>(v);
      o = json{{"kind", "form"}, {"chart", charts.add(f.chart())}, {"degree", f.degree()}, {"value", format_form(f)}};
      break;
    }
    case Kind::Multivector: {
      const auto& X = std::get<MultiVectorField>(v);
      o = json{{"kind", "multivector"}, {"chart", charts.add(X.chart())}, {"degree", X.degree()}, {"value", format_multivector(X)}};
      break;
    }
    case Kind::Map: {
      o = json{{"kind", "map"}};
      o.update(map_json(std::get<SmoothMap>(v), charts));
      break;
    }
    case Kind::Frame: {
      const auto& L = std::get<SubbundleFrame>(v);
      json sections = json::array();
      for (const auto& s : L.sections) sections.push_back(json{{"X", format_multivector(s.X)}, {"alpha", format_form(s.alpha)}});
      o = json{{"kind", "frame"}, {"chart", charts.add(L.chart)}, {"k", L.k}, {"sections", sections}};
      break;
    }
    case Kind::Algebroid: o = algebroid_json(std::get<LieAlgebroid>(v), charts); break;
    case Kind::IMForm: {
      const auto& m = std::get<IMFormMap>(v);
      json mu = json::array();
      for (const auto& f : m.mu) mu.push_back(format_form(f));
      json a = algebroid_json(m.algebroid, charts);
      a.erase("kind");
      o = json{{"kind", "im-form"}, {"k", m.k}, {"algebroid", a}, {"mu", mu}};
      break;
    }
    case Kind::Groupoid: {
      const auto& g = std::get<GroupoidChart>(v);
      o = json{{"kind", "groupoid"},       {"label", g.name},
               {"G", charts.add(g.G)},     {"M", charts.add(g.M)},
               {"P", charts.add(g.P)},     {"s", scalars(g.s.components)},
               {"t", scalars(g.t.components)}, {"eps", scalars(g.eps.components)},
               {"inv", scalars(g.inv.components)}, {"pr1", scalars(g.pr1.components)},
               {"pr2", scalars(g.pr2.components)}, {"m", scalars(g.m.components)}};
      if (g.inv_pair) o["inv_pair"] = scalars(g.inv_pair->components);
      if (g.unit_complement) {
        json u = json::array();
        for (const auto& va : *g.unit_complement) u.push_back(scalars(va.components));
        o["unit_complement"] = u;
      }
      if (g.right_ext) {
        json r = json::array();
        for (const auto& X : *g.right_ext) r.push_back(format_multivector(X));
        o["right_ext"] = r;
      }
      if (g.structure) o["structure"] = structure_json(*g.structure);
      break;
    }
    case Kind::CE: {
      const auto& g = std::get<CEComplex>(v);
      json st = json::array();
      for (std::size_t l = 0; l < g.rank; ++l)
        for (std::size_t i = 0; i < g.rank; ++i)
          for (std::size_t j = i + 1; j < g.rank; ++j)
            if (g.c[l][i][j] != 0) st.push_back(json{{"l", l + 1}, {"i", i + 1}, {"j", j + 1}, {"value", g.c[l][i][j].get_str()}});
      json pairing = json::array();
      for (const auto& row : g.pairing) {
        json r = json::array();
        for (const auto& q : row) r.push_back(q.get_str());
        pairing.push_back(r);
      }
      o = json{{"kind", "ce-algebra"}, {"chart", g.chart->name()}, {"rank", g.rank}, {"structure", st}, {"pairing", pairing}};
      break;
    }
  }
  return o;
}

// ---------------------------------------------------------------- parsing

class Parser {
 public:
  explicit Parser(Scenario& s) : s_(s) {}

  void charts(const json& arr) {
    if (!arr.is_array()) scenario_error("'charts' must be an array");
    for (const auto& c : arr) {
      const std::string name = str(c, "name", "chart");
      if (charts_.count(name)) scenario_error("chart '" + name + "' declared twice");
      if (!c.contains("coords") || !c["coords"].is_array()) scenario_error("chart '" + name + "' needs a 'coords' array");
      std::vector<std::string> coords;
      for (const auto& x : c["coords"]) {
        if (!x.is_string()) scenario_error("chart '" + name + "' coordinates must be strings");
        coords.push_back(x.get<std::string>());
      }
      auto chart = payload("chart '" + name + "'", [&] { return make_chart(name, coords); });
      charts_[name] = chart;
      s_.charts.push_back(chart);
    }
  }

  void objects(const json& arr) {
    if (!arr.is_array()) scenario_error("'objects' must be an array");
    for (const auto& o : arr) {
      const std::string name = str(o, "name", "object");
      const std::string kind = str(o, "kind", "object '" + name + "'");
      if (kind == "catalog") {
        catalog(o, name);
        continue;
      }
      add(name, object(o, name, kind));
    }
  }

 private:
  static std::string str(const json& o, const char* key, const std::string& ctx) {
    if (!o.is_object() || !o.contains(key) || !o[key].is_string()) scenario_error(ctx + " needs a string field '" + key + "'");
    return o[key].get<std::string>();
  }
  static long integer(const json& o, const char* key, const std::string& ctx) {
    if (!o.contains(key) || !o[key].is_number_integer()) scenario_error(ctx + " needs an integer field '" + key + "'");
    return o[key].get<long>();
  }
  static const json& array(const json& o, const char* key, const std::string& ctx) {
    if (!o.contains(key) || !o[key].is_array()) scenario_error(ctx + " needs an array field '" + key + "'");
    return o[key];
  }
  static std::vector<std::string> strings(const json& arr, const std::string& ctx) {
    std::vector<std::string> out;
    for (const auto& x : arr) {
      if (!x.is_string()) scenario_error(ctx + " entries must be strings");
      out.push_back(x.get<std::string>());
    }
    return out;
  }

  ChartPtr chart(const json& o, const char* key, const std::string& ctx) {
    const std::string name = str(o, key, ctx);
    auto it = charts_.find(name);
    if (it == charts_.end()) throw Error(ErrorKind::UnknownName, ctx + " refers to undeclared chart '" + name + "'");
    return it->second;
  }

  void add(const std::string& name, ObjectValue v) {
    if (index_.count(name)) scenario_error("object '" + name + "' declared twice");
    index_[name] = s_.objects.size();
    s_.objects.push_back(NamedObject{name, std::move(v)});
  }

  std::vector<RationalFunction> functions(const json& arr, const ChartPtr& chart, const std::string& ctx) {
    std::vector<RationalFunction> out;
    for (const auto& e : strings(arr, ctx)) out.push_back(payload(ctx, [&] { return parse_scalar(e, chart).with_chart(chart); }));
    return out;
  }

  SmoothMap map(const json& o, const ChartPtr& source, const ChartPtr& target, const char* key, const std::string& ctx) {
    const std::string c = ctx + " field '" + key + "'";
    auto comps = functions(array(o, key, ctx), source, c);
    if (comps.size() != target->dim()) scenario_error(c + " needs " + std::to_string(target->dim()) + " components");
    return SmoothMap(source, target, std::move(comps));
  }

  LieAlgebroid::Structure structure(const json& arr, std::size_t rank, const ChartPtr& chart, const std::string& ctx) {
    const RationalFunction zero(Polynomial::constant(chart, 0));
    LieAlgebroid::Structure c(rank, std::vector<std::vector<RationalFunction>>(rank, std::vector<RationalFunction>(rank, zero)));
    for (const auto& e : arr) {
      long l = integer(e, "l", ctx) - 1, i = integer(e, "i", ctx) - 1, j = integer(e, "j", ctx) - 1;
      const long r = static_cast<long>(rank);
      if (l < 0 || i < 0 || j < 0 || l >= r || i >= r || j >= r || i == j) scenario_error(ctx + " has a structure entry out of range");
      auto v = payload(ctx, [&] { return parse_scalar(str(e, "value", ctx), chart).with_chart(chart); });
      c[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      c[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = -v;
    }
    return c;
  }

  LieAlgebroid algebroid(const json& o, const std::string& ctx) {
    auto M = chart(o, "chart", ctx);
    const auto anchors = strings(array(o, "anchor", ctx), ctx);
    const std::size_t r = anchors.size();
    if (o.contains("rank") && integer(o, "rank", ctx) != static_cast<long>(r)) scenario_error(ctx + " rank disagrees with its anchor list");
    SymMatrix anchor(M->dim(), r);
    for (std::size_t i = 0; i < r; ++i) {
      auto X = payload(ctx, [&] { return parse_multivector(anchors[i], M, 1); });
      if (X.degree() != 1) scenario_error(ctx + " anchor entries must be vector fields");
      auto comps = vector_components(X);
      for (std::size_t a = 0; a < M->dim(); ++a) anchor(a, i) = comps[a];
    }
    auto st = o.contains("structure") ? structure(array(o, "structure", ctx), r, M, ctx) : structure(json::array(), r, M, ctx);
    return payload(ctx, [&] { return LieAlgebroid(M, anchor, st); });
  }

  ObjectValue object(const json& o, const std::string& name, const std::string& kind) {
    const std::string ctx = "object '" + name + "'";
    if (kind == "scalar") {
      auto c = chart(o, "chart", ctx);
      auto f = payload(ctx, [&] { return parse_scalar(str(o, "value", ctx), c).with_chart(c); });
      return DiffForm::scalar(c, f);
    }
    if (kind == "form") {
      auto c = chart(o, "chart", ctx);
      int degree = o.contains("degree") ? static_cast<int>(integer(o, "degree", ctx)) : 0;
      auto f = payload(ctx, [&] { return parse_form(str(o, "value", ctx), c, degree); });
      if (o.contains("degree") && f.degree() != degree && !f.is_zero()) scenario_error(ctx + " value does not have the declared degree");
      if (f.degree() == 0) scenario_error(ctx + " is a degree-0 form; declare it as a scalar");
      return f;
    }
    if (kind == "multivector") {
      auto c = chart(o, "chart", ctx);
      int degree = o.contains("degree") ? static_cast<int>(integer(o, "degree", ctx)) : 1;
      auto X = payload(ctx, [&] { return parse_multivector(str(o, "value", ctx), c, degree); });
      if (o.contains("degree") && X.degree() != degree && !X.is_zero()) scenario_error(ctx + " value does not have the declared degree");
      return X;
    }
    if (kind == "map") {
      auto src = chart(o, "source", ctx), tgt = chart(o, "target", ctx);
      return map(o, src, tgt, "components", ctx);
    }
    if (kind == "frame") {
      auto c = chart(o, "chart", ctx);
      int k = static_cast<int>(integer(o, "k", ctx));
      if (k < 1) scenario_error(ctx + " needs k >= 1");
      std::vector<CourantSection> sections;
      for (const auto& sj : array(o, "sections", ctx)) {
        auto X = sj.contains("X") ? payload(ctx, [&] { return parse_multivector(str(sj, "X", ctx), c, 1); })
                                  : MultiVectorField::zero(c, 1);
        auto a = sj.contains("alpha") ? payload(ctx, [&] { return parse_form(str(sj, "alpha", ctx), c, k); })
                                      : DiffForm::zero(c, k);
        if ((X.degree() != 1 && !X.is_zero()) || (a.degree() != k && !a.is_zero()))
          scenario_error(ctx + " sections need a vector field and a k-form");
        if (X.is_zero()) X = MultiVectorField::zero(c, 1);
        if (a.is_zero()) a = DiffForm::zero(c, k);
        sections.emplace_back(c, k, X, a);
      }
      return payload(ctx, [&] { return SubbundleFrame(c, k, std::move(sections)); });
    }
    if (kind == "algebroid") return algebroid(o, ctx);
    if (kind == "im-form") {
      LieAlgebroid A;
      if (o.contains("algebroid") && o["algebroid"].is_string()) {
        const std::string ref = o["algebroid"].get<std::string>();
        auto it = index_.find(ref);
        if (it == index_.end()) throw Error(ErrorKind::UnknownName, ctx + " refers to undeclared object '" + ref + "'");
        if (kind_of(s_.objects[it->second].value) != Kind::Algebroid) scenario_error(ctx + ": '" + ref + "' is not an algebroid");
        A = std::get<LieAlgebroid>(s_.objects[it->second].value);
      } else if (o.contains("algebroid") && o["algebroid"].is_object()) {
        A = algebroid(o["algebroid"], ctx + " algebroid");
      } else {
        scenario_error(ctx + " needs an 'algebroid' name or object");
      }
      IMFormMap m{A, static_cast<int>(integer(o, "k", ctx)), {}};
      for (const auto& f : strings(array(o, "mu", ctx), ctx))
        m.mu.push_back(payload(ctx, [&] { return parse_form(f, A.chart(), m.k); }));
      if (m.mu.size() != A.rank()) scenario_error(ctx + " needs one mu entry per frame element");
      for (auto& f : m.mu)
        if (f.is_zero()) f = DiffForm::zero(A.chart(), m.k);
        else if (f.degree() != m.k) scenario_error(ctx + " mu entries must have degree k");
      return m;
    }
    if (kind == "groupoid") {
      GroupoidChart g;
      g.name = o.contains("label") ? str(o, "label", ctx) : name;
      g.G = chart(o, "G", ctx);
      g.M = chart(o, "M", ctx);
      g.P = chart(o, "P", ctx);
      g.s = map(o, g.G, g.M, "s", ctx);
      g.t = map(o, g.G, g.M, "t", ctx);
      g.eps = map(o, g.M, g.G, "eps", ctx);
      g.inv = map(o, g.G, g.G, "inv", ctx);
      g.pr1 = map(o, g.P, g.G, "pr1", ctx);
      g.pr2 = map(o, g.P, g.G, "pr2", ctx);
      g.m = map(o, g.P, g.G, "m", ctx);
      if (o.contains("inv_pair")) g.inv_pair = map(o, g.G, g.P, "inv_pair", ctx);
      if (o.contains("unit_complement")) {
        std::vector<VectorAlong> units;
        for (const auto& u : array(o, "unit_complement", ctx)) {
          auto comps = functions(u, g.M, ctx + " unit_complement");
          if (comps.size() != g.G->dim()) scenario_error(ctx + " unit_complement entries need one component per G coordinate");
          units.push_back(VectorAlong{g.M, g.G, comps});
        }
        g.unit_complement = units;
      }
      if (o.contains("right_ext")) {
        std::vector<MultiVectorField> right;
        for (const auto& r : strings(array(o, "right_ext", ctx), ctx)) {
          auto X = payload(ctx, [&] { return parse_multivector(r, g.G, 1); });
          if (X.degree() != 1) scenario_error(ctx + " right_ext entries must be vector fields");
          right.push_back(X);
        }
        g.right_ext = right;
      }
      if (o.contains("structure")) {
        std::size_t r = g.unit_complement ? g.unit_complement->size() : 0;
        g.structure = structure(array(o, "structure", ctx), r, g.M, ctx);
      }
      return g;
    }
    if (kind == "ce-algebra") {
      const long r = integer(o, "rank", ctx);
      if (r < 1) scenario_error(ctx + " needs rank >= 1");
      const std::size_t n = static_cast<std::size_t>(r);
      const std::string cname = o.contains("chart") ? str(o, "chart", ctx) : name;
      std::vector<std::string> coords;
      for (std::size_t i = 0; i < n; ++i) coords.push_back("e" + std::to_string(i + 1));
      auto scratch = make_chart(cname, coords);
      auto constant = [&](const json& v) {
        if (!v.is_string()) scenario_error(ctx + " constants must be strings");
        auto f = payload(ctx, [&] { return parse_scalar(v.get<std::string>(), scratch); });
        if (!f.is_constant()) scenario_error(ctx + " constants must be rational numbers");
        return f.is_zero() ? Rational(0) : f.constant_value();
      };
      CEComplex::Constants c(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, Rational(0))));
      if (o.contains("structure"))
        for (const auto& e : array(o, "structure", ctx)) {
          long l = integer(e, "l", ctx) - 1, i = integer(e, "i", ctx) - 1, j = integer(e, "j", ctx) - 1;
          if (l < 0 || i < 0 || j < 0 || l >= r || i >= r || j >= r || i == j) scenario_error(ctx + " has a structure entry out of range");
          if (!e.contains("value")) scenario_error(ctx + " structure entries need a value");
          Rational q = constant(e["value"]);
          c[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = q;
          c[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = -q;
        }
      std::vector<std::vector<Rational>> pairing(n, std::vector<Rational>(n, Rational(0)));
      if (o.contains("pairing")) {
        const auto& rows = array(o, "pairing", ctx);
        if (rows.size() != n) scenario_error(ctx + " pairing needs rank rows");
        for (std::size_t i = 0; i < n; ++i) {
          if (!rows[i].is_array() || rows[i].size() != n) scenario_error(ctx + " pairing needs rank columns");
          for (std::size_t j = 0; j < n; ++j) pairing[i][j] = constant(rows[i][j]);
        }
      } else {
        for (std::size_t i = 0; i < n; ++i) pairing[i][i] = 1;
      }
      return payload(ctx, [&] { return CEComplex(c, pairing, cname); });
    }
    scenario_error(ctx + " has unknown kind '" + kind + "'");
  }

  void catalog(const json& o, const std::string& name) {
    const std::string ctx = "object '" + name + "'";
    const std::string cat = str(o, "catalog", ctx);
    std::map<std::string, std::string> params;
    if (o.contains("params")) {
      if (!o["params"].is_object()) scenario_error(ctx + " params must be an object");
      for (const auto& [key, value] : o["params"].items()) {
        if (value.is_string())
          params[key] = value.get<std::string>();
        else if (value.is_number_integer())
          params[key] = std::to_string(value.get<long>());
        else
          scenario_error(ctx + " parameter '" + key + "' must be a string or an integer");
      }
    }
    auto inst = payload(ctx, [&] { return instantiate(cat, params); });
    for (auto& part : inst.objects) add(name + "." + part.name, std::move(part.value));
  }

  Scenario& s_;
  std::map<std::string, ChartPtr> charts_;
  std::map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------- operations

struct Ctx {
  const Scenario& s;
  std::uint64_t seed;
  Exec exec;

  std::vector<SamplePoint> points(const ChartPtr& chart, const std::vector<Polynomial>& avoid = {}) const {
    if (s.sampling.count == 0) return {};
    return draw_points(chart, seed, s.sampling.count, s.sampling.box, avoid);
  }
  CheckMode mode(const std::string& m, const ChartPtr& chart, const std::vector<Polynomial>& avoid = {}) const {
    if (m == "generic") return CheckMode::generic_only();
    if (m == "sampled") return CheckMode::sampled(points(chart, avoid));
    return CheckMode::both(points(chart, avoid));
  }
};

void collect_denominators(const DiffForm& a, std::vector<Polynomial>& out) {
  for (const auto& [idx, c] : a.coeffs())
    if (!c.den().is_constant()) merge_loci(out, {c.den()});
}
void collect_denominators(const MultiVectorField& a, std::vector<Polynomial>& out) {
  for (const auto& [idx, c] : a.coeffs())
    if (!c.den().is_constant()) merge_loci(out, {c.den()});
}
std::vector<Polynomial> denominators(const SubbundleFrame& L) {
  std::vector<Polynomial> out;
  for (const auto& s : L.sections) {
    collect_denominators(s.X, out);
    collect_denominators(s.alpha, out);
  }
  return out;
}
std::vector<Polynomial> denominators(const DiffForm& a) {
  std::vector<Polynomial> out;
  collect_denominators(a, out);
  return out;
}

using Args = std::vector<const ObjectValue*>;
using Runner = std::function<Verdict(const Ctx&, const Args&, const std::string& mode)>;

struct OpDef {
  std::vector<Kind> kinds;
  bool has_mode = false;
  Runner run;
};

template <class T>
const T& arg(const Args& a, std::size_t i) { return std::get<T>(*a[i]); }

Verdict named(Verdict v, const std::string& name) {
  v.name = name;
  return v;
}

Verdict lagrangian_verdict(const Ctx& ctx, const SubbundleFrame& L) {
  auto prof = orthogonal_profile(L, ctx.points(L.chart, denominators(L)), ctx.exec);
  Verdict v;
  v.name = "lagrangian";
  v.validity = Validity::Generic;
  v.locus = prof.locus;
  v.pass = prof.isotropic && prof.generic_lagrangian;
  v.detail = "dim L = " + std::to_string(prof.generic_dim_L) + ", dim L-perp = " + std::to_string(prof.generic_dim_perp) +
             ", dim (L-perp in TM) = " + std::to_string(prof.generic_dim_perp_tangent);
  if (!prof.points.empty()) {
    v.validity = Validity::GenericAndSampled;
    for (const auto& p : prof.points) v.points.push_back(p.point);
    std::string dims;
    for (const auto& p : prof.points) dims += (dims.empty() ? "" : ",") + std::to_string(p.dim_perp);
    v.detail += "; pointwise dim L-perp = [" + dims + "]";
  }
  if (!v.pass) v.residual = v.detail;
  return v;
}

Verdict leaf_forms_verdict(const Ctx& ctx, const SubbundleFrame& L) {
  auto pts = ctx.points(L.chart, denominators(L));
  Verdict v = Verdict::identity("leaf_forms", true);
  v.validity = Validity::Sampled;
  v.points = pts;
  std::vector<LeafTensor> t(pts.size());
  parallel_for(pts.size(), ctx.exec, [&](std::size_t i) { t[i] = leaf_form_at(L, pts[i]); });
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!t[i].is_zero()) {
      v.pass = false;
      v.residual = "nonzero leaf form at " + format_point(pts[i]);
      break;
    }
  return v;
}

Verdict from_L_verdict(const Ctx& ctx, const SubbundleFrame& L, const std::string& mode) {
  auto a = algebroid_from_L(L);
  auto m = ctx.mode(mode, L.chart, denominators(L));
  return Verdict::itemized("algebroid_from_L", {named(check_algebroid_axioms(a.algebroid, ctx.seed, ctx.exec), "axioms"),
                                                named(check_im_form(a.im, ctx.exec), "im_form"),
                                                named(check_im_nondeg(a.im, m, ctx.exec), "im_nondeg")});
}

const std::map<std::string, OpDef>& operations() {
  using K = Kind;
  static const std::map<std::string, OpDef> ops = {
      {"is_closed", {{K::Form}, false, [](const Ctx&, const Args& a, const std::string&) { return is_closed(arg<DiffForm>(a, 0)); }}},
      {"check_nondegenerate",
       {{K::Form}, true,
        [](const Ctx& c, const Args& a, const std::string& m) {
          const auto& w = arg<DiffForm>(a, 0);
          return check_nondegenerate(PlecticCandidate{w, c.mode(m, w.chart(), denominators(w))}, c.exec);
        }}},
      {"is_d_of",
       {{K::Form, K::Form}, false,
        [](const Ctx&, const Args& a, const std::string&) {
          DiffForm diff = arg<DiffForm>(a, 0) - exterior_derivative(arg<DiffForm>(a, 1));
          return Verdict::identity("is_d_of", diff.is_zero(), "difference " + format_form(diff));
        }}},
      {"jacobiator",
       {{K::Form, K::Form, K::Form, K::Form}, false,
        [](const Ctx&, const Args& a, const std::string&) {
          return jacobiator_check(arg<DiffForm>(a, 0), arg<DiffForm>(a, 1), arg<DiffForm>(a, 2), arg<DiffForm>(a, 3));
        }}},
      {"poisson_jacobiator",
       {{K::Multivector}, false,
        [](const Ctx&, const Args& a, const std::string&) {
          auto J = poisson_jacobiator(arg<MultiVectorField>(a, 0));
          return Verdict::identity("poisson_jacobiator", J.is_zero(), format_multivector(J));
        }}},
      {"is_isotropic",
       {{K::Frame}, false, [](const Ctx& c, const Args& a, const std::string&) { return is_isotropic(arg<SubbundleFrame>(a, 0), c.exec); }}},
      {"is_involutive",
       {{K::Frame}, false, [](const Ctx& c, const Args& a, const std::string&) { return is_involutive(arg<SubbundleFrame>(a, 0), c.exec); }}},
      {"check_nondeg_L",
       {{K::Frame}, true,
        [](const Ctx& c, const Args& a, const std::string& m) {
          const auto& L = arg<SubbundleFrame>(a, 0);
          return check_nondeg_L(L, c.mode(m, L.chart, denominators(L)), c.exec);
        }}},
      {"is_lagrangian",
       {{K::Frame}, false, [](const Ctx& c, const Args& a, const std::string&) { return lagrangian_verdict(c, arg<SubbundleFrame>(a, 0)); }}},
      {"frame_rank",
       {{K::Frame}, false,
        [](const Ctx& c, const Args& a, const std::string&) {
          const auto& L = arg<SubbundleFrame>(a, 0);
          return check_frame_rank(L, c.points(L.chart, denominators(L)), c.exec);
        }}},
      {"check_dl",
       {{K::Frame}, true,
        [](const Ctx& c, const Args& a, const std::string& m) {
          const auto& L = arg<SubbundleFrame>(a, 0);
          return check_dl(to_dl(L), c.mode(m, L.chart, denominators(L)), c.exec);
        }}},
      {"dl_round_trip",
       {{K::Frame}, false,
        [](const Ctx&, const Args& a, const std::string&) {
          const auto& L = arg<SubbundleFrame>(a, 0);
          return named(same_subbundle(from_dl(to_dl(L)), L), "dl_round_trip");
        }}},
      {"same_subbundle",
       {{K::Frame, K::Frame}, false,
        [](const Ctx&, const Args& a, const std::string&) { return same_subbundle(arg<SubbundleFrame>(a, 0), arg<SubbundleFrame>(a, 1)); }}},
      {"leaf_forms_zero",
       {{K::Frame}, false, [](const Ctx& c, const Args& a, const std::string&) { return leaf_forms_verdict(c, arg<SubbundleFrame>(a, 0)); }}},
      {"check_morphism",
       {{K::Map, K::Frame, K::Frame}, false,
        [](const Ctx&, const Args& a, const std::string&) {
          return check_morphism(arg<SmoothMap>(a, 0), to_dl(arg<SubbundleFrame>(a, 1)), to_dl(arg<SubbundleFrame>(a, 2)));
        }}},
      {"algebroid_from_L",
       {{K::Frame}, true, [](const Ctx& c, const Args& a, const std::string& m) { return from_L_verdict(c, arg<SubbundleFrame>(a, 0), m); }}},
      {"algebroid_axioms",
       {{K::Algebroid}, false,
        [](const Ctx& c, const Args& a, const std::string&) { return check_algebroid_axioms(arg<LieAlgebroid>(a, 0), c.seed, c.exec); }}},
      {"im_form", {{K::IMForm}, false, [](const Ctx& c, const Args& a, const std::string&) { return check_im_form(arg<IMFormMap>(a, 0), c.exec); }}},
      {"im_nondeg",
       {{K::IMForm}, true,
        [](const Ctx& c, const Args& a, const std::string& m) {
          const auto& im = arg<IMFormMap>(a, 0);
          return check_im_nondeg(im, c.mode(m, im.algebroid.chart()), c.exec);
        }}},
      {"groupoid_axioms",
       {{K::Groupoid}, false, [](const Ctx&, const Args& a, const std::string&) { return check_groupoid_axioms(arg<GroupoidChart>(a, 0)); }}},
      {"multiplicative",
       {{K::Groupoid, K::Form}, false,
        [](const Ctx&, const Args& a, const std::string&) { return check_multiplicative(arg<GroupoidChart>(a, 0), arg<DiffForm>(a, 1)); }}},
      {"unit_inversion",
       {{K::Groupoid, K::Form}, false,
        [](const Ctx&, const Args& a, const std::string&) { return check_unit_inversion(arg<GroupoidChart>(a, 0), arg<DiffForm>(a, 1)); }}},
      {"right_translation",
       {{K::Groupoid, K::Form}, false,
        [](const Ctx&, const Args& a, const std::string&) { return check_right_translation(arg<GroupoidChart>(a, 0), arg<DiffForm>(a, 1)); }}},
      {"groupoid_algebroid",
       {{K::Groupoid}, false,
        [](const Ctx& c, const Args& a, const std::string&) {
          return named(check_algebroid_axioms(extract_algebroid(arg<GroupoidChart>(a, 0)), c.seed, c.exec), "groupoid_algebroid");
        }}},
      {"induced_im_form",
       {{K::Groupoid, K::Form}, false,
        [](const Ctx& c, const Args& a, const std::string&) {
          return check_im_form(induced_im_form(arg<GroupoidChart>(a, 0), arg<DiffForm>(a, 1)), c.exec);
        }}},
      {"induced_im_nondeg",
       {{K::Groupoid, K::Form}, true,
        [](const Ctx& c, const Args& a, const std::string& m) {
          const auto& g = arg<GroupoidChart>(a, 0);
          return check_im_nondeg(induced_im_form(g, arg<DiffForm>(a, 1)), c.mode(m, g.M), c.exec);
        }}},
      {"ce_jacobi", {{K::CE}, false, [](const Ctx&, const Args& a, const std::string&) { return ce_jacobi(arg<CEComplex>(a, 0)); }}},
      {"ce_d_squared", {{K::CE}, false, [](const Ctx&, const Args& a, const std::string&) { return ce_d_squared(arg<CEComplex>(a, 0)); }}},
      {"ce_invariance", {{K::CE}, false, [](const Ctx&, const Args& a, const std::string&) { return ce_invariance(arg<CEComplex>(a, 0)); }}},
      {"ce_cartan",
       {{K::CE}, false,
        [](const Ctx&, const Args& a, const std::string&) {
          auto cf = ce_cartan(arg<CEComplex>(a, 0));
          auto dH = Verdict::identity("dH", cf.dH.is_zero(), format_form(cf.dH));
          dH.detail = "H = " + format_form(cf.H);
          return Verdict::itemized("ce_cartan", {dH, named(cf.nondegenerate, "nondegenerate")});
        }}},
  };
  return ops;
}

void validate_check(const Scenario& s, CheckSpec& c, std::size_t index) {
  const std::string ctx = "check " + std::to_string(index + 1) + " ('" + c.name + "')";
  auto it = operations().find(c.op);
  if (it == operations().end()) throw Error(ErrorKind::UnknownName, ctx + " uses unknown operation '" + c.op + "'");
  const auto& def = it->second;
  if (c.args.size() != def.kinds.size())
    scenario_error(ctx + " needs " + std::to_string(def.kinds.size()) + " arguments, got " + std::to_string(c.args.size()));
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    const ObjectValue* v = s.find(c.args[i]);
    if (!v) throw Error(ErrorKind::UnknownName, ctx + " refers to undeclared object '" + c.args[i] + "'");
    if (kind_of(*v) != def.kinds[i])
      scenario_error(ctx + " argument '" + c.args[i] + "' is a " + kind_name(kind_of(*v)) + ", expected a " + kind_name(def.kinds[i]));
  }
  if (!c.mode.empty() && c.mode != "generic" && c.mode != "sampled" && c.mode != "generic+sampled")
    scenario_error(ctx + " has invalid mode '" + c.mode + "'");
  if (!c.mode.empty() && !def.has_mode) scenario_error(ctx + ": operation '" + c.op + "' takes no mode");
}

json verdict_json(const Verdict& v) {
  json o;
  o["name"] = v.name;
  o["verdict"] = v.pass ? "pass" : "fail";
  o["validity"] = to_string(v.validity);
  if (!v.pass && !v.residual.empty()) o["residual"] = v.residual;
  if (!v.locus.empty()) o["locus"] = v.locus;
  if (!v.points.empty()) {
    json pts = json::array();
    for (const auto& p : v.points) pts.push_back(format_point(p));
    o["points"] = pts;
  }
  if (!v.detail.empty()) o["detail"] = v.detail;
  if (!v.items.empty()) {
    json items = json::array();
    for (const auto& i : v.items) items.push_back(verdict_json(i));
    o["items"] = items;
  }
  return o;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Error: return "error";
  }
  return "error";
}

}  // namespace

const ObjectValue* Scenario::find(const std::string& object) const {
  for (const auto& o : objects)
    if (o.name == object) return &o.value;
  return nullptr;
}

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw SyntaxError(e.byte, "malformed scenario JSON");
  }
  if (!doc.is_object()) scenario_error("a scenario must be a JSON object");
  Scenario s;
  s.name = doc.contains("scenario") && doc["scenario"].is_string() ? doc["scenario"].get<std::string>() : "scenario";
  Parser p(s);
  if (doc.contains("charts")) p.charts(doc["charts"]);
  if (doc.contains("objects")) p.objects(doc["objects"]);
  if (doc.contains("sampling")) {
    const auto& sm = doc["sampling"];
    if (!sm.is_object()) scenario_error("'sampling' must be an object");
    auto nonneg = [&](const char* key) {
      if (!sm[key].is_number_integer() || sm[key].get<long long>() < 0) scenario_error(std::string("sampling.") + key + " must be a nonnegative integer");
      return sm[key].get<long long>();
    };
    if (sm.contains("seed")) s.sampling.seed = static_cast<std::uint64_t>(nonneg("seed"));
    if (sm.contains("count")) s.sampling.count = static_cast<std::size_t>(nonneg("count"));
    if (sm.contains("box")) s.sampling.box = static_cast<long>(nonneg("box"));
    if (s.sampling.box < 1) scenario_error("sampling.box must be positive");
  }
  if (doc.contains("checks")) {
    if (!doc["checks"].is_array()) scenario_error("'checks' must be an array");
    for (const auto& cj : doc["checks"]) {
      if (!cj.is_object() || !cj.contains("op") || !cj["op"].is_string()) scenario_error("every check needs a string 'op'");
      CheckSpec c;
      c.op = cj["op"].get<std::string>();
      c.name = cj.contains("name") && cj["name"].is_string() ? cj["name"].get<std::string>() : c.op;
      if (cj.contains("args")) {
        if (!cj["args"].is_array()) scenario_error("check '" + c.name + "' args must be an array");
        for (const auto& a : cj["args"]) {
          if (!a.is_string()) scenario_error("check '" + c.name + "' args must be object names");
          c.args.push_back(a.get<std::string>());
        }
      }
      if (cj.contains("mode")) {
        if (!cj["mode"].is_string()) scenario_error("check '" + c.name + "' mode must be a string");
        c.mode = cj["mode"].get<std::string>();
      }
      s.checks.push_back(std::move(c));
    }
  }
  for (std::size_t i = 0; i < s.checks.size(); ++i) validate_check(s, s.checks[i], i);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) scenario_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
  ChartNames charts;
  for (const auto& c : s.charts) charts.add(c);
  json objects = json::array();
  for (const auto& o : s.objects) {
    json j = json{{"name", o.name}};
    j.update(object_json(o.value, charts));
    objects.push_back(j);
  }
  json chart_arr = json::array();
  for (const auto& [c, name] : charts.entries()) chart_arr.push_back(json{{"name", name}, {"coords", c->coords()}});
  json checks = json::array();
  for (const auto& c : s.checks) {
    json j = json{{"name", c.name}, {"op", c.op}, {"args", c.args}};
    if (!c.mode.empty()) j["mode"] = c.mode;
    checks.push_back(j);
  }
  json doc;
  doc["scenario"] = s.name;
  doc["charts"] = chart_arr;
  doc["objects"] = objects;
  doc["sampling"] = json{{"seed", s.sampling.seed}, {"count", s.sampling.count}, {"box", s.sampling.box}};
  doc["checks"] = checks;
  return doc.dump(2) + "\n";
}

Scenario scenario_from_instance(const CatalogInstance& inst, const std::string& name) {
  Scenario s;
  s.name = name;
  s.objects = inst.objects;
  s.checks = inst.checks;
  for (std::size_t i = 0; i < s.checks.size(); ++i) validate_check(s, s.checks[i], i);
  return s;
}

std::string catalog_command(const std::string& name, const std::map<std::string, std::string>& params) {
  auto inst = instantiate(name, params);
  std::string title = name;
  for (const auto& [k, v] : params) title += " " + k + "=" + v;
  return scenario_to_json(scenario_from_instance(inst, title));
}

int Report::exit_code() const {
  for (const auto& r : results)
    if (r.outcome != Outcome::Pass) return 1;
  return 0;
}

std::string Report::to_json(bool timing) const {
  json checks = json::array();
  for (const auto& r : results) {
    json o;
    o["name"] = r.spec.name;
    o["op"] = r.spec.op;
    o["verdict"] = outcome_name(r.outcome);
    if (r.outcome == Outcome::Error) {
      o["validity"] = "none";
      o["residual"] = r.error;
    } else {
      json v = verdict_json(r.verdict);
      o["validity"] = v["validity"];
      for (const char* key : {"residual", "locus", "points", "detail", "items"})
        if (v.contains(key)) o[key] = v[key];
    }
    if (timing) o["millis"] = r.millis;
    checks.push_back(o);
  }
  json doc;
  doc["scenario"] = scenario;
  doc["seed"] = seed;
  doc["checks"] = checks;
  return doc.dump(2) + "\n";
}

std::string Report::render() const {
  std::string out = "scenario " + scenario + " (seed " + std::to_string(seed) + ")\n";
  std::size_t pass = 0, fail = 0, error = 0;
  for (const auto& r : results) {
    if (r.outcome == Outcome::Error) {
      ++error;
      out += "ERROR " + r.spec.name + " (" + r.spec.op + ")\n  " + r.error + "\n";
      continue;
    }
    (r.outcome == Outcome::Pass ? pass : fail)++;
    Verdict v = r.verdict;
    v.name = r.spec.name + " (" + r.spec.op + ")";
    out += v.render();
  }
  out += std::to_string(pass) + " passed, " + std::to_string(fail) + " failed, " + std::to_string(error) + " errors\n";
  return out;
}

Report run_scenario(const Scenario& s, Exec exec) {
  Report rep;
  rep.scenario = s.name;
  rep.seed = s.sampling.seed;
  for (std::size_t i = 0; i < s.checks.size(); ++i) {
    const auto& spec = s.checks[i];
    const auto& def = operations().at(spec.op);
    CheckResult r;
    r.spec = spec;
    Args args;
    for (const auto& a : spec.args) args.push_back(s.find(a));
    const std::string mode = spec.mode.empty() ? "generic" : spec.mode;
    Ctx ctx{s, derive_seed(s.sampling.seed, i), exec};
    auto start = std::chrono::steady_clock::now();
    try {
      r.verdict = def.run(ctx, args, mode);
      r.outcome = r.verdict.pass ? Outcome::Pass : Outcome::Fail;
    } catch (const std::exception& e) {
      r.outcome = Outcome::Error;
      r.error = e.what();
    }
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rep.results.push_back(std::move(r));
  }
  return rep;
}

std::vector<std::string> scenario_operations() {
  std::vector<std::string> out;
  for (const auto& [name, def] : operations()) out.push_back(name);
  return out;
}

}  // namespace msk
