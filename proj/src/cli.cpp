#include "scalekit/cli.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "scalekit/convolution.hpp"
#include "scalekit/io.hpp"

namespace scalekit {

namespace {

Complex parse_complex(const std::string& text, const std::string& what) {
  std::stringstream ss(text);
  double re = 0, im = 0;
  char comma = 0;
  if (!(ss >> re)) throw ParseError(what + ": expected re[,im], got '" + text + "'");
  if (ss >> comma) {
    if (comma != ',' || !(ss >> im)) throw ParseError(what + ": expected re[,im], got '" + text + "'");
  }
  std::string rest;
  if (ss >> rest) throw ParseError(what + ": trailing characters in '" + text + "'");
  return {re, im};
}

std::vector<Complex> parse_complex_list(const std::string& text, const std::string& what) {
  std::vector<Complex> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(';', start);
    out.push_back(parse_complex(text.substr(start, pos == std::string::npos ? pos : pos - start), what));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ParseError(what + ": '" + item + "' is not an integer");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError(what + ": empty list");
  return out;
}

std::vector<GroupIndex> parse_window(const std::string& arg, std::size_t arity) {
  const Json j = load_json_arg(arg);
  if (!j.is_array() || j.empty()) throw ParseError("--window: expected a nonempty JSON array");
  std::vector<GroupIndex> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = "--window[" + std::to_string(i) + "]";
    std::vector<int> k;
    if (j[i].is_number_integer()) {
      k.push_back(j[i].get<int>());
    } else if (j[i].is_array()) {
      for (const auto& e : j[i]) {
        if (!e.is_number_integer()) throw ParseError(f + ": expected integers");
        k.push_back(e.get<int>());
      }
    } else {
      throw ParseError(f + ": expected an integer or integer array");
    }
    if (k.size() != arity) throw ParseError(f + ": expected " + std::to_string(arity) + " exponents");
    out.emplace_back(std::move(k));
  }
  return out;
}

struct Output {
  std::string path;
  std::string format;  // "", "json" or "csv"

  bool csv() const {
    if (!format.empty()) return format == "csv";
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  }

  void write(const std::string& text, std::ostream& out) const {
    if (path.empty() || path == "-") {
      out << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError(path + ": cannot open for writing");
    f << text;
  }
};

int analyze_exit(const StabilityReport& r) {
  switch (r.verdict) {
    case Verdict::fail: return kExitPropertyFails;
    case Verdict::inconclusive: return kExitUncertified;
    case Verdict::pass: return r.certified ? kExitOk : kExitUncertified;
  }
  return kExitUsage;
}

Property parse_property(const std::string& s) {
  if (s == "bibo") return Property::bibo;
  if (s == "dissipative") return Property::dissipative;
  if (s == "l1l2" || s == "l1_l2") return Property::l1_l2;
  throw ParseError("--property: unknown property '" + s + "'");
}

StabilityReport analyze(const ScaleTimeSignal& h, Property p, bool cone, std::size_t samples,
                        std::uint64_t seed, double tol) {
  CertifyOptions opt;
  opt.tol = tol;
  switch (p) {
    case Property::bibo: return bibo_analysis(h, cone, opt);
    case Property::dissipative: return dissipativity_check(h, samples, seed, opt);
    case Property::l1_l2: return l1l2_gain(h, opt);
  }
  throw ParseError("unknown property");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-scale double convolution systems: transforms, filtering and stability analysis",
               "scalekit"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  Output output;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  auto common = [&](CLI::App* sub, bool with_format) {
    sub->add_option("--out", output.path, "Write the result here instead of stdout");
    if (with_format) {
      sub->add_option("--format", output.format, "json or csv (default from --out extension)")
          ->check(CLI::IsMember({"json", "csv"}));
    }
  };

  std::function<int()> action;

  // scale-transform
  auto* st = app.add_subcommand("scale-transform", "Scale transform of a coefficient sequence over a group window");
  std::string group_arg, coeff_arg, window_arg;
  std::size_t time_len = 0;
  st->add_option("--group", group_arg, "Group JSON (inline or file)")->required();
  st->add_option("--signal", coeff_arg, "Coefficient sequence JSON (inline or file)")->required();
  st->add_option("--window", window_arg, "JSON array of group indices")->required();
  st->add_option("--time-len", time_len, "Rows kept per column")->required()->check(CLI::PositiveNumber);
  st->add_option("--tol", tol, "Truncation tolerance");
  common(st, true);
  st->callback([&] {
    action = [&] {
      const ScaleGroup g = group_from_json(load_json_arg(group_arg));
      const CoeffSeq x = coeff_seq_from_json(load_json_arg(coeff_arg));
      const auto window = parse_window(window_arg, g.arity());
      const auto y = scale_transform(g, x, window, time_len, tol);
      output.write(output.csv() ? to_csv(y) : canonical_dump(to_json(y)), out);
      return int{kExitOk};
    };
  });

  // filter / oracle
  std::string h_path, u_path, mode = "full", method = "direct";
  auto* fi = app.add_subcommand("filter", "Double time-and-scale convolution y = h * u");
  fi->add_option("--h", h_path, "Impulse response (CSV or dense JSON)")->required();
  fi->add_option("--u", u_path, "Input (CSV or dense JSON)")->required();
  fi->add_option("--mode", mode, "full or cone")->check(CLI::IsMember({"full", "cone"}));
  fi->add_option("--method", method, "direct or spectral")->check(CLI::IsMember({"direct", "spectral"}));
  common(fi, true);
  fi->callback([&] {
    action = [&] {
      const auto h = load_signal(h_path);
      const auto u = load_signal(u_path);
      const ScaleMode m = mode == "cone" ? ScaleMode::causal_cone : ScaleMode::full;
      const auto y = method == "spectral" ? double_convolve_spectral(h, u, m) : double_convolve(h, u, m);
      output.write(output.csv() ? to_csv(y) : canonical_dump(to_json(y)), out);
      return int{kExitOk};
    };
  });

  auto* orc = app.add_subcommand("oracle", "Brute-force double convolution (small inputs)");
  orc->add_option("--h", h_path, "Impulse response (CSV or dense JSON)")->required();
  orc->add_option("--u", u_path, "Input (CSV or dense JSON)")->required();
  common(orc, true);
  orc->callback([&] {
    action = [&] {
      const auto y = brute_force_double_convolve(load_signal(h_path), load_signal(u_path));
      output.write(output.csv() ? to_csv(y) : canonical_dump(to_json(y)), out);
      return int{kExitOk};
    };
  });

  // spectrum
  std::string signal_path, grid_arg, z_arg;
  std::size_t slice = 0;
  auto* sp = app.add_subcommand("spectrum", "Fourier transform of a slice, or H(z, theta) with --z");
  sp->add_option("--signal", signal_path, "Signal (CSV or dense JSON)")->required();
  sp->add_option("--grid", grid_arg, "Comma-separated grid sizes, one per axis")->required();
  sp->add_option("--slice", slice, "Time slice to transform (default 0)");
  sp->add_option("--z", z_arg, "re,im: evaluate the transfer function at this z instead");
  common(sp, true);
  sp->callback([&] {
    action = [&] {
      const auto s = load_signal(signal_path);
      const auto grid = parse_int_list(grid_arg, "--grid");
      SpectrumGrid g;
      if (!z_arg.empty()) {
        g = transfer_eval(s, parse_complex(z_arg, "--z"), grid);
      } else {
        if (slice >= s.length()) throw DomainError("--slice " + std::to_string(slice) + " out of range");
        g = gamma_fourier(s[slice], grid);
      }
      output.write(output.csv() ? to_csv(g) : canonical_dump(to_json(g)), out);
      return int{kExitOk};
    };
  });

  // gtf-eval
  std::string zs_arg;
  auto* ge = app.add_subcommand("gtf-eval", "Evaluate the generalized transfer function");
  ge->add_option("--system", signal_path, "Impulse response (CSV or dense JSON)")->required();
  ge->add_option("--z", z_arg, "re,im")->required();
  ge->add_option("--zs", zs_arg, "re,im;re,im;... one per scale variable")->required();
  common(ge, false);
  ge->callback([&] {
    action = [&] {
      const auto h = load_signal(signal_path);
      const Complex z = parse_complex(z_arg, "--z");
      const auto zs = parse_complex_list(zs_arg, "--zs");
      const Complex v = gtf_eval(h, z, zs);
      Json pts = Json::array();
      for (Complex w : zs) pts.push_back(to_json(w));
      output.write(canonical_dump(Json{{"z", to_json(z)}, {"zs", pts}, {"value", to_json(v)}}), out);
      return int{kExitOk};
    };
  });

  // moments-check / stieltjes
  std::string moments_arg;
  auto* mc = app.add_subcommand("moments-check", "Toeplitz positivity of a moment sequence");
  mc->add_option("--moments", moments_arg, "{\"t\": [[re,im]...]} inline or file")->required();
  mc->add_option("--tol", tol, "Eigenvalue tolerance");
  common(mc, false);
  mc->callback([&] {
    action = [&] {
      const auto r = toeplitz_psd_check(moments_from_json(load_json_arg(moments_arg)), tol);
      output.write(canonical_dump(to_json(r)), out);
      return r.is_psd ? int{kExitOk} : int{kExitPropertyFails};
    };
  });

  double a = 0, b = 0, r = 0.99;
  std::size_t quad = 2001;
  auto* sj = app.add_subcommand("stieltjes", "Interval mass of the moment measure");
  sj->add_option("--moments", moments_arg, "{\"t\": [[re,im]...]} inline or file")->required();
  sj->add_option("--a", a, "Interval start")->required();
  sj->add_option("--b", b, "Interval end")->required();
  sj->add_option("--r", r, "Radius in (0,1)");
  sj->add_option("--quad", quad, "Quadrature points");
  common(sj, false);
  sj->callback([&] {
    action = [&] {
      const auto m = stieltjes_invert(moments_from_json(load_json_arg(moments_arg)), a, b, r, quad);
      Json j = to_json(m);
      j["a"] = a;
      j["b"] = b;
      j["r"] = r;
      j["quad_points"] = quad;
      output.write(canonical_dump(j), out);
      return int{kExitOk};
    };
  });

  // analyze
  std::string property;
  bool cone = false;
  std::size_t samples = 12;
  auto* an = app.add_subcommand("analyze", "Certified stability analysis");
  an->add_option("--property", property, "bibo, dissipative or l1l2")->required()
      ->check(CLI::IsMember({"bibo", "dissipative", "l1l2", "l1_l2"}));
  an->add_option("--system", signal_path, "Impulse response (CSV or dense JSON)")->required();
  an->add_flag("--cone", cone, "Restrict to cone-supported signals (bibo)");
  an->add_option("--samples", samples, "Gram sample points (dissipative)");
  an->add_option("--seed", seed, "Seed for sampled checks");
  an->add_option("--tol", tol, "Certification tolerance");
  common(an, false);
  an->callback([&] {
    action = [&] {
      const auto h = load_signal(signal_path);
      const auto rep = analyze(h, parse_property(property), cone, samples, seed, tol);
      Json j = to_json(rep);
      j["seed"] = seed;
      j["sample_count"] = samples;
      j["system"] = to_json(h);
      output.write(canonical_dump(j), out);
      return analyze_exit(rep);
    };
  });

  // verify
  std::string report_arg;
  std::size_t trials = 50;
  auto* ve = app.add_subcommand("verify", "Monte-Carlo check of an analyze report");
  ve->add_option("--report", report_arg, "Report from analyze (inline or file)");
  ve->add_option("--system", signal_path, "Impulse response; defaults to the report's system");
  ve->add_option("--property", property, "Analyze first when no report is given")
      ->check(CLI::IsMember({"bibo", "dissipative", "l1l2", "l1_l2"}));
  ve->add_flag("--cone", cone, "Cone mode when analyzing");
  ve->add_option("--trials", trials, "Random inputs")->check(CLI::PositiveNumber);
  ve->add_option("--seed", seed, "Seed for the random inputs");
  ve->add_option("--tol", tol, "Certification tolerance when analyzing");
  common(ve, false);
  ve->callback([&] {
    action = [&] {
      StabilityReport rep;
      ScaleTimeSignal h;
      if (!report_arg.empty()) {
        const Json j = load_json_arg(report_arg);
        rep = report_from_json(j);
        if (!signal_path.empty()) {
          h = load_signal(signal_path);
        } else if (j.contains("system")) {
          h = signal_from_json(j["system"]);
        } else {
          throw ParseError("--report: no embedded system; pass --system");
        }
      } else {
        if (property.empty() || signal_path.empty()) {
          throw ParseError("verify needs --report, or --property with --system");
        }
        h = load_signal(signal_path);
        rep = analyze(h, parse_property(property), cone, samples, seed, tol);
      }
      const auto vr = empirical_verify(h, rep, trials, seed);
      Json j = to_json(vr);
      j["verdict"] = to_string(rep.verdict);
      output.write(canonical_dump(j), out);
      return vr.ok ? int{kExitOk} : int{kExitPropertyFails};
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? int{kExitOk} : int{kExitUsage};
  }

  try {
    return action();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    err << "not certified: " << e.what() << " (achieved " << e.achieved() << ")\n";
    return kExitUncertified;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace scalekit
