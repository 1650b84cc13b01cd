#include "scalekit/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dense.hpp"

namespace scalekit {

namespace {

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // keep it recognizably floating point
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void dump(const Json& j, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(k).dump() + ": ";
        dump(v, depth + 1, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(j[i], depth + 1, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ParseError("field '" + field + "': " + msg);
}

const Json& member(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object()) fail(field, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(field.empty() ? key : field + "." + key, "missing");
  return *it;
}

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

long integer(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<long>();
}

std::vector<int> int_list(const Json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an integer array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(static_cast<int>(integer(j[i], field + "[" + std::to_string(i) + "]")));
  }
  return out;
}

Json opt(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

std::optional<double> opt_number(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return number(*it, key);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

Json index_box_json(const IndexBox& b) {
  return Json{{"lo", b.lo.exponents()}, {"hi", b.hi.exponents()}};
}

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  dump(j, 0, out);
  out += "\n";
  return out;
}

Json parse_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ParseError(source + ":" + std::to_string(line) + ": invalid JSON (" + e.what() + ")");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load_json_arg(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
    return parse_json(arg, "<inline>");
  }
  return parse_json(read_file(arg), arg);
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& field) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(field, "expected [re, im]");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Json to_json(const SuMatrix& m) { return Json{{"a", to_json(m.a())}, {"b", to_json(m.b())}}; }

SuMatrix su_matrix_from_json(const Json& j, const std::string& field) {
  try {
    if (j.is_object() && j.contains("alpha")) {
      return make_scale_shift(number(member(j, "alpha", field), field + ".alpha"),
                              j.contains("theta") ? number(j["theta"], field + ".theta") : 0.0);
    }
    return SuMatrix(complex_from_json(member(j, "a", field), field + ".a"),
                    complex_from_json(member(j, "b", field), field + ".b"));
  } catch (const DomainError& e) {
    fail(field, e.what());
  }
}

Json to_json(const ScaleGroup& g) {
  Json gens = Json::array();
  for (const auto& m : g.generators()) gens.push_back(to_json(m));
  return Json{{"p", g.arity()}, {"generators", gens}};
}

ScaleGroup group_from_json(const Json& j) {
  const Json& gens = member(j, "generators", "");
  if (!gens.is_array()) fail("generators", "expected an array");
  std::vector<SuMatrix> ms;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    ms.push_back(su_matrix_from_json(gens[i], "generators[" + std::to_string(i) + "]"));
  }
  if (j.contains("p") && integer(j["p"], "p") != static_cast<long>(ms.size())) {
    fail("p", "does not match the number of generators");
  }
  try {
    return make_group(ms);
  } catch (const DomainError& e) {
    fail("generators", e.what());
  }
}

Json to_json(const CoeffSeq& c) {
  Json coeffs = Json::array();
  for (Complex z : c.coeffs) coeffs.push_back(to_json(z));
  return Json{{"coeffs", coeffs}, {"tail_bound", c.tail_bound}};
}

CoeffSeq coeff_seq_from_json(const Json& j) {
  CoeffSeq c;
  const Json& arr = j.is_array() ? j : member(j, "coeffs", "");
  if (!arr.is_array()) fail("coeffs", "expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    c.coeffs.push_back(complex_from_json(arr[i], "coeffs[" + std::to_string(i) + "]"));
  }
  if (j.is_object() && j.contains("tail_bound")) {
    c.tail_bound = number(j["tail_bound"], "tail_bound");
    if (c.tail_bound < 0) fail("tail_bound", "must be nonnegative");
  }
  return c;
}

Json to_json(const ScaleSignal& s) {
  Json out = Json::array();
  for (const auto& [k, v] : s) out.push_back(Json{{"k", k.exponents()}, {"v", to_json(v)}});
  return out;
}

ScaleSignal scale_signal_from_json(const Json& j, std::size_t arity, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of {k, v}");
  ScaleSignal s(arity);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    const auto k = int_list(member(j[i], "k", f), f + ".k");
    if (k.size() != arity) fail(f + ".k", "expected " + std::to_string(arity) + " exponents");
    s.add(GroupIndex(k), complex_from_json(member(j[i], "v", f), f + ".v"));
  }
  return s;
}

Json to_json(const ScaleTimeSignal& s) {
  const std::size_t p = s.arity();
  const auto box = s.bounding_box();
  Json shape = Json::array({s.length()});
  Json offset = Json::array();
  for (std::size_t i = 0; i < p; ++i) {
    shape.push_back(box ? box->width(i) : 0);
    offset.push_back(box ? box->lo[i] : 0);
  }
  Json data = Json::array();
  if (box) {
    const detail::DenseBox layout(*box);
    for (std::size_t n = 0; n < s.length(); ++n) {
      for (std::size_t off = 0; off < layout.size(); ++off) {
        data.push_back(to_json(s[n].at(layout.index_of(off))));
      }
    }
  }
  return Json{{"arity", p}, {"shape", shape}, {"offset", offset}, {"data", data}};
}

ScaleTimeSignal signal_from_json(const Json& j) {
  const long p = integer(member(j, "arity", ""), "arity");
  if (p < 1) fail("arity", "must be at least 1");
  const auto shape = int_list(member(j, "shape", ""), "shape");
  if (shape.size() != static_cast<std::size_t>(p) + 1) fail("shape", "expected arity + 1 entries");
  for (int w : shape) {
    if (w < 0) fail("shape", "entries must be nonnegative");
  }
  std::vector<int> offset(static_cast<std::size_t>(p), 0);
  if (j.contains("offset")) offset = int_list(j["offset"], "offset");
  if (offset.size() != static_cast<std::size_t>(p)) fail("offset", "expected arity entries");
  const Json& data = member(j, "data", "");
  if (!data.is_array()) fail("data", "expected an array");

  ScaleTimeSignal s(static_cast<std::size_t>(p), static_cast<std::size_t>(shape[0]));
  std::size_t volume = 1;
  for (std::size_t i = 1; i < shape.size(); ++i) volume *= static_cast<std::size_t>(shape[i]);
  if (data.size() != volume * static_cast<std::size_t>(shape[0])) {
    fail("data", "expected " + std::to_string(volume * static_cast<std::size_t>(shape[0])) +
                     " values, got " + std::to_string(data.size()));
  }
  if (volume == 0) return s;
  GroupIndex lo(offset), hi(offset);
  for (std::size_t i = 0; i < offset.size(); ++i) hi[i] += shape[i + 1] - 1;
  const detail::DenseBox layout(IndexBox{lo, hi});
  std::size_t idx = 0;
  for (std::size_t n = 0; n < s.length(); ++n) {
    for (std::size_t off = 0; off < volume; ++off, ++idx) {
      const Complex v = complex_from_json(data[idx], "data[" + std::to_string(idx) + "]");
      if (!is_finite(v)) fail("data[" + std::to_string(idx) + "]", "not finite");
      s[n].set(layout.index_of(off), v);
    }
  }
  return s;
}

std::string to_csv(const ScaleTimeSignal& s) {
  std::string out = "n";
  for (std::size_t i = 1; i <= s.arity(); ++i) out += ",k" + std::to_string(i);
  out += ",re,im\n";
  for (std::size_t n = 0; n < s.length(); ++n) {
    for (const auto& [k, v] : s[n]) {
      out += std::to_string(n);
      for (int e : k.exponents()) out += "," + std::to_string(e);
      out += "," + format_double(v.real()) + "," + format_double(v.imag()) + "\n";
    }
  }
  return out;
}

ScaleTimeSignal signal_from_csv(std::string_view text, const std::string& source) {
  std::optional<ScaleTimeSignal> s;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    const auto where = source + ":" + std::to_string(line_no);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const auto cols = split(line, ',');
    if (line_no == 1 && !cols.empty() && cols[0] == "n") continue;
    if (cols.size() < 4) throw ParseError(where + ": expected n,k1..kp,re,im");
    const std::size_t p = cols.size() - 3;
    if (!s) s.emplace(p, 0);
    if (p != s->arity()) {
      throw ParseError(where + ": expected " + std::to_string(s->arity() + 3) + " columns, got " +
                       std::to_string(cols.size()));
    }
    auto parse_int = [&](const std::string& f, const std::string& name) {
      std::size_t used = 0;
      long v = 0;
      try {
        v = std::stol(f, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != f.size() || f.empty()) throw ParseError(where + ": field '" + name + "': not an integer");
      return v;
    };
    auto parse_real = [&](const std::string& f, const std::string& name) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(f, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != f.size() || f.empty() || !std::isfinite(v)) {
        throw ParseError(where + ": field '" + name + "': not a finite number");
      }
      return v;
    };
    const long n = parse_int(cols[0], "n");
    if (n < 0) throw ParseError(where + ": field 'n': must be nonnegative");
    GroupIndex k = GroupIndex::zero(p);
    for (std::size_t i = 0; i < p; ++i) {
      k[i] = static_cast<int>(parse_int(cols[i + 1], "k" + std::to_string(i + 1)));
    }
    const Complex v(parse_real(cols[p + 1], "re"), parse_real(cols[p + 2], "im"));
    if (static_cast<std::size_t>(n) >= s->length()) s->resize(static_cast<std::size_t>(n) + 1);
    (*s)[static_cast<std::size_t>(n)].add(k, v);
  }
  if (!s) throw ParseError(source + ": no data rows");
  return *s;
}

ScaleTimeSignal load_signal(const std::filesystem::path& path) {
  const std::string& arg = path.native();
  if (!arg.empty() && arg.front() == '{') {
    const Json j = parse_json(arg, "<inline>");
    return signal_from_json(j.contains("system") ? j["system"] : j);
  }
  const std::string text = read_file(path);
  if (path.extension() == ".csv") return signal_from_csv(text, path.string());
  const Json j = parse_json(text, path.string());
  try {
    return signal_from_json(j.is_object() && j.contains("system") ? j["system"] : j);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Json to_json(const SpectrumGrid& g) {
  Json values = Json::array();
  for (Complex z : g.values) values.push_back(to_json(z));
  return Json{{"grid_sizes", g.grid_sizes}, {"values", values}};
}

std::string to_csv(const SpectrumGrid& g) {
  std::string out;
  for (std::size_t i = 1; i <= g.grid_sizes.size(); ++i) out += "j" + std::to_string(i) + ",";
  out += "re,im\n";
  for (std::size_t off = 0; off < g.size(); ++off) {
    for (int c : g.coordinates(off)) out += std::to_string(c) + ",";
    out += format_double(g.values[off].real()) + "," + format_double(g.values[off].imag()) + "\n";
  }
  return out;
}

Json to_json(const MomentSequence& ms) {
  Json t = Json::array();
  for (Complex z : ms.t) t.push_back(to_json(z));
  return Json{{"t", t}};
}

MomentSequence moments_from_json(const Json& j) {
  const Json& t = member(j, "t", "");
  if (!t.is_array() || t.empty()) fail("t", "expected a nonempty array");
  MomentSequence ms;
  for (std::size_t i = 0; i < t.size(); ++i) {
    ms.t.push_back(complex_from_json(t[i], "t[" + std::to_string(i) + "]"));
  }
  return ms;
}

Json to_json(const PsdReport& r) {
  return Json{{"is_psd", r.is_psd}, {"min_eigenvalue", r.min_eigenvalue}, {"order", r.order}};
}

Json to_json(const IntervalMass& m) {
  return Json{{"mass", m.mass}, {"endpoint_uncertainty", m.endpoint_uncertainty}};
}

Json to_json(const OperatorNormBracket& b) {
  return Json{{"lower", b.lower}, {"upper", b.upper}, {"certified", b.certified},
              {"argmax_theta", b.argmax_theta}};
}

Json to_json(const StabilityReport& r) {
  Json j{{"property", to_string(r.property)},
         {"verdict", to_string(r.verdict)},
         {"certified", r.certified},
         {"cone", r.cone},
         {"tol", r.tol},
         {"sufficient_upper", opt(r.sufficient_upper)},
         {"necessary_lower", opt(r.necessary_lower)}};
  Json w = Json::object();
  switch (r.property) {
    case Property::bibo: {
      Json slices = Json::array();
      for (const auto& b : r.slice_norms) slices.push_back(to_json(b));
      w["slice_norms"] = slices;
      w["symbol_lower"] = opt(r.symbol_lower);
      if (r.bibo_witness) {
        w["adversarial"] = Json{{"n", r.bibo_witness->n},
                                {"value", r.bibo_witness->value},
                                {"origin", r.bibo_witness->origin},
                                {"v", to_json(r.bibo_witness->v)}};
      }
      break;
    }
    case Property::dissipative: {
      w["sup_lower"] = opt(r.sup_lower);
      w["argmax_theta"] = r.argmax_theta;
      w["grid_sizes"] = r.grid_sizes;
      if (r.gram) {
        w["gram"] = Json{{"sample_count", r.gram->sample_count},
                         {"seed", r.gram->seed},
                         {"radius", r.gram->radius},
                         {"min_eigenvalue", r.gram->min_eigenvalue},
                         {"psd", r.gram->psd}};
      } else {
        w["gram"] = nullptr;
      }
      if (r.resonant) {
        Json pt = Json::array();
        for (Complex z : r.resonant->point) pt.push_back(to_json(z));
        w["resonant"] = Json{{"point", pt},
                             {"value", to_json(r.resonant->value)},
                             {"time_len", r.resonant->time_len},
                             {"box", index_box_json(r.resonant->box)},
                             {"energy_ratio", r.resonant->energy_ratio}};
      }
      break;
    }
    case Property::l1_l2: {
      w["h2_norm"] = opt(r.h2_norm);
      w["sup_lower"] = opt(r.sup_lower);
      w["argmax_theta"] = r.argmax_theta;
      w["grid_sizes"] = r.grid_sizes;
      break;
    }
  }
  j["witness"] = w;
  return j;
}

StabilityReport report_from_json(const Json& j) {
  StabilityReport r;
  const auto prop = member(j, "property", "").get<std::string>();
  if (prop == "bibo") {
    r.property = Property::bibo;
  } else if (prop == "dissipative") {
    r.property = Property::dissipative;
  } else if (prop == "l1_l2") {
    r.property = Property::l1_l2;
  } else {
    fail("property", "unknown property '" + prop + "'");
  }
  const auto verdict = member(j, "verdict", "").get<std::string>();
  if (verdict == "pass") {
    r.verdict = Verdict::pass;
  } else if (verdict == "fail") {
    r.verdict = Verdict::fail;
  } else if (verdict == "inconclusive") {
    r.verdict = Verdict::inconclusive;
  } else {
    fail("verdict", "unknown verdict '" + verdict + "'");
  }
  r.certified = j.value("certified", true);
  r.cone = j.value("cone", false);
  if (j.contains("tol")) r.tol = number(j["tol"], "tol");
  r.sufficient_upper = opt_number(j, "sufficient_upper");
  r.necessary_lower = opt_number(j, "necessary_lower");

  if (!j.contains("witness")) return r;
  const Json& w = j["witness"];
  if (w.contains("adversarial")) {
    const Json& a = w["adversarial"];
    const Json& v = member(a, "v", "witness.adversarial");
    std::size_t arity = 1;
    if (v.is_array() && !v.empty() && v[0].contains("k") && v[0]["k"].is_array()) {
      arity = v[0]["k"].size();
    }
    BiboWitness bw;
    bw.n = static_cast<std::size_t>(integer(member(a, "n", "witness.adversarial"), "witness.adversarial.n"));
    bw.v = scale_signal_from_json(v, arity, "witness.adversarial.v");
    bw.value = number(member(a, "value", "witness.adversarial"), "witness.adversarial.value");
    bw.origin = a.value("origin", "");
    r.bibo_witness = std::move(bw);
  }
  if (w.contains("resonant")) {
    const Json& rs = w["resonant"];
    ResonantWitness rw;
    const Json& pt = member(rs, "point", "witness.resonant");
    for (std::size_t i = 0; i < pt.size(); ++i) {
      rw.point.push_back(complex_from_json(pt[i], "witness.resonant.point[" + std::to_string(i) + "]"));
    }
    rw.value = complex_from_json(member(rs, "value", "witness.resonant"), "witness.resonant.value");
    rw.time_len = static_cast<std::size_t>(
        integer(member(rs, "time_len", "witness.resonant"), "witness.resonant.time_len"));
    const Json& box = member(rs, "box", "witness.resonant");
    rw.box = IndexBox{GroupIndex(int_list(member(box, "lo", "witness.resonant.box"), "witness.resonant.box.lo")),
                      GroupIndex(int_list(member(box, "hi", "witness.resonant.box"), "witness.resonant.box.hi"))};
    rw.energy_ratio = number(member(rs, "energy_ratio", "witness.resonant"), "witness.resonant.energy_ratio");
    r.resonant = std::move(rw);
  }
  if (w.contains("h2_norm")) r.h2_norm = opt_number(w, "h2_norm");
  return r;
}

Json to_json(const VerifyReport& r) {
  Json j{{"property", to_string(r.property)},
         {"trials", r.trials},
         {"seed", r.seed},
         {"bound", r.bound},
         {"max_gain", r.max_gain},
         {"max_ratio", r.max_ratio},
         {"within_bound", r.within_bound}};
  if (r.replay) {
    j["replay"] = Json{{"kind", r.replay->kind},
                       {"observed", r.replay->observed},
                       {"target", r.replay->target},
                       {"reached", r.replay->reached}};
  } else {
    j["replay"] = nullptr;
  }
  j["ok"] = r.ok;
  return j;
}

}  // namespace scalekit
