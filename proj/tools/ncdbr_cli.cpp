// Copyright 2026 The ncdbr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line driver: ncdbr <command> [flags]. Writes a JSON report and exits
// 0 when every verdict passes, 1 on a failed verdict, 2 on bad input.

#include "ncdbr/ncdbr.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

using namespace ncdbr;

namespace {

struct Options {
  std::string input;
  std::string poly;
  std::string out;
  int points = 10;
  double radius = 0.7;
  std::uint64_t seed = 42;
  int max_len = -1;
  double tol = 1e-8;
  bool tol_given = false;
  bool omit_timing = false;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
  if (path.empty()) throw InputError("--input is required");
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
}

RowContraction read_row_contraction(const json& j, const Tolerance& tol) {
  RowContraction t = row_contraction_from_json(j);
  if (!t.is_contractive(tol)) {
    std::ostringstream s;
    s << "input is not a row contraction (row norm " << op_norm(t.row()) << ")";
    throw Error(ErrorKind::NotContraction, s.str());
  }
  return t;
}

struct PointSpec {
  MatrixTuple z;
  Index level;
  std::uint64_t seed;
};

// Sample points cycle through levels 1, 2, 3; each point records its own seed.
std::vector<PointSpec> draw_points(int d, int count, double radius, std::uint64_t seed, std::uint64_t stream = 0) {
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  std::vector<PointSpec> out;
  for (int k = 0; k < count; ++k) {
    std::uint64_t s = rng();
    Index n = 1 + k % 3;
    out.push_back({sample_ball_point(d, n, radius, s), n, s});
  }
  return out;
}

json point_json(const PointSpec& p, int index) { return json{{"index", index}, {"level", p.level}, {"seed", p.seed}}; }

struct Report {
  json body = json::object();
  bool pass = true;

  void verdict(const std::string& name, bool ok) {
    body["verdicts"][name] = ok;
    pass = pass && ok;
  }
  void residual(const std::string& name, double v) { body["residuals"][name] = v; }
};

double norm_or_zero(const Mat& m) { return m.size() ? op_norm(m) : 0.0; }

void cmd_cnc_check(const Options& o, Report& r, const Tolerance& tol) {
  RowContraction t = read_row_contraction(read_json_file(o.input), tol);
  CncRank c = cnc_rank(t, tol);
  Defects df = defects(t, tol);
  r.body["results"] = {{"m", t.m()},
                       {"d", t.d()},
                       {"row_norm", op_norm(t.row())},
                       {"cnc_dim", c.dim},
                       {"is_cnc", c.is_cnc},
                       {"stabilized_at", c.stabilized_at},
                       {"is_partial_isometry", is_partial_isometry(t, tol)},
                       {"rank_D_T", numerical_rank(df.D_T, tol)},
                       {"rank_D_Tstar", numerical_rank(df.D_Tstar, tol)}};
  r.body["points"] = json::array();
}

void cmd_charfn(const Options& o, Report& r, const Tolerance& tol) {
  RowContraction t = read_row_contraction(read_json_file(o.input), tol);
  SchurSampler b = char_fn(t, tol);
  Mat delta = defect_point(t, tol);
  r.body["results"] = {{"input_dim", b.input_dim}, {"output_dim", b.output_dim}, {"is_cnc", cnc_rank(t, tol).is_cnc}};
  double worst_norm = 0.0;
  json pts = json::array();
  auto specs = draw_points(t.d(), o.points, o.radius, o.seed);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    Mat bz = b(specs[i].z);
    double nb = norm_or_zero(bz);
    worst_norm = std::max(worst_norm, nb);
    json pj = point_json(specs[i], static_cast<int>(i));
    pj["norm"] = nb;
    pj["value"] = matrix_to_json(bz);
    pts.push_back(pj);
  }
  r.body["points"] = pts;
  double at_zero = delta.size() ? op_norm(b.at_zero() - delta) : 0.0;
  r.residual("max_norm", worst_norm);
  r.residual("value_at_zero_vs_defect_point", at_zero);
  r.verdict("contractive", worst_norm <= 1.0 + o.tol);
  r.verdict("value_at_zero_is_defect_point", at_zero <= o.tol);
}

void cmd_compare_popescu(const Options& o, Report& r, const Tolerance& tol) {
  RowContraction t = read_row_contraction(read_json_file(o.input), tol);
  // fit on level-2 points from a separate stream, report on the holdout points
  std::vector<PointSpec> fit_specs;
  std::vector<MatrixTuple> fit, hold;
  for (const auto& p : draw_points(t.d(), 4, o.radius, o.seed, 1)) {
    fit_specs.push_back({sample_ball_point(t.d(), 2, o.radius, p.seed), 2, p.seed});
    fit.push_back(fit_specs.back().z);
  }
  auto hold_specs = draw_points(t.d(), o.points, o.radius, o.seed);
  for (const auto& p : hold_specs) hold.push_back(p.z);
  SchurSampler b1 = char_fn(t, tol), b2 = popescu_char(t, tol);
  CoincidenceFit f = weak_coincidence_fit(b1, b2, fit, hold, o.tol, tol);
  json pts = json::array();
  for (std::size_t i = 0; i < hold_specs.size(); ++i) {
    const auto& p = hold_specs[i];
    json pj = point_json(p, static_cast<int>(i));
    // the fitted maps are partial isometries between the supports, so this equals the restricted residual
    if (f.dims_match) {
      Mat lhs = lift(f.U_out, p.level) * b1(p.z), rhs = b2(p.z) * lift(f.U_in, p.level);
      pj["residual"] = norm_or_zero(Mat(lhs - rhs));
    }
    pts.push_back(pj);
  }
  r.body["points"] = pts;
  r.body["fit_points"] = json::array();
  for (std::size_t i = 0; i < fit_specs.size(); ++i)
    r.body["fit_points"].push_back(point_json(fit_specs[i], static_cast<int>(i)));
  r.body["results"] = {{"dims_match", f.dims_match},
                       {"sweeps", f.sweeps},
                       {"char_fn_dims", {b1.output_dim, b1.input_dim}},
                       {"popescu_dims", {b2.output_dim, b2.input_dim}}};
  r.residual("fit", f.fit_residual);
  r.residual("holdout_max", f.residual);
  r.verdict("weak_coincidence", f.verdict);
}

void cmd_kernel_psd(const Options& o, Report& r, const Tolerance& tol) {
  RowContraction t = read_row_contraction(read_json_file(o.input), tol);
  SchurSampler b = char_fn(t, tol);
  double worst = std::numeric_limits<double>::infinity();
  bool all = true;
  json pts = json::array();
  auto specs = draw_points(t.d(), o.points, o.radius, o.seed);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    CpCheck c = cp_check(b, specs[i].z);
    json pj = point_json(specs[i], static_cast<int>(i));
    pj["min_eig"] = c.min_eig;
    pj["psd"] = c.psd;
    pts.push_back(pj);
    worst = std::min(worst, c.min_eig);
    all = all && c.psd;
  }
  r.body["points"] = pts;
  r.residual("min_eig", specs.empty() ? 0.0 : worst);
  r.verdict("completely_positive", all);
}

void cmd_frostman(const Options& o, Report& r, const Tolerance& tol) {
  RowContraction t = read_row_contraction(read_json_file(o.input), tol);
  SchurSampler b = char_fn(t, tol);
  r.body["results"] = {{"input_dim", b.input_dim}, {"output_dim", b.output_dim}};
  if (b.input_dim == 0 || b.output_dim == 0) {
    r.body["points"] = json::array();
    r.residual("fixed_point_max", 0.0);
    r.verdict("fixed_point", true);
    return;
  }
  std::mt19937_64 rng(o.seed);
  Mat alpha = random_contraction(b.output_dim, b.input_dim, 0.5, rng);
  SchurSampler fixed = frostman_shift(b, b.at_zero(), tol);
  SchurSampler moved = frostman_shift(b, alpha, tol);
  double worst = 0.0;
  json pts = json::array();
  auto specs = draw_points(t.d(), o.points, o.radius, o.seed);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    double e = op_norm(fixed(specs[i].z) - b(specs[i].z));
    json pj = point_json(specs[i], static_cast<int>(i));
    pj["fixed_point_residual"] = e;
    pts.push_back(pj);
    worst = std::max(worst, e);
  }
  double norm = op_norm(moved.at_zero() - alpha);
  r.body["points"] = pts;
  r.body["results"]["alpha"] = matrix_to_json(alpha);
  r.residual("fixed_point_max", worst);
  r.residual("shift_to_alpha", norm);
  r.verdict("fixed_point", worst <= o.tol);
  r.verdict("shift_to_alpha", norm <= o.tol);
}

void cmd_roundtrip(const Options& o, Report& r, const Tolerance& tol) {
  RowContraction t = read_row_contraction(read_json_file(o.input), tol);
  DefectData dd = defect_data(t, tol);
  const RowContraction& v = dd.parts.V;
  // the input's own defect point rebuilds it
  double self = op_norm(reconstruct(v, dd.delta, tol).row() - t.row());
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  double worst = 0.0;
  json pts = json::array();
  for (int k = 0; k < o.points; ++k) {
    double nrm = unif(rng);
    Mat delta = random_contraction(dd.frames.gamma0.cols(), dd.frames.gammaInf.cols(), nrm, rng);
    double e = delta.size() ? op_norm(defect_point(reconstruct(v, delta, tol), tol) - delta) : 0.0;
    pts.push_back({{"index", k}, {"delta_norm", delta.size() ? op_norm(delta) : 0.0}, {"residual", e}});
    worst = std::max(worst, e);
  }
  r.body["points"] = pts;
  r.body["results"] = {{"p", dd.frames.gamma0.cols()}, {"q", dd.frames.gammaInf.cols()}};
  r.residual("roundtrip_max", worst);
  r.residual("self_reconstruction", self);
  r.verdict("roundtrip", worst <= std::min(o.tol, 1e-10));
  r.verdict("self_reconstruction", self <= o.tol);
}

void cmd_model_verify(const Options& o, Report& r, const Tolerance& tol) {
  RowContraction t = read_row_contraction(read_json_file(o.input), tol);
  int N = o.max_len >= 0 ? o.max_len : (t.d() == 1 ? 8 : t.d() == 2 ? 6 : 4);
  ModelReport m = model_verify(t, N, tol);
  r.body["inputs"]["max_len"] = N;
  r.body["points"] = json::array();
  r.body["results"] = {{"state_dim", m.state_dim}, {"model_dim", m.model_dim}, {"tail_norm", m.tail_norm}};
  r.residual("frame", m.frame_residual);
  r.residual("intertwine", m.intertwine_residual);
  r.residual("compressed_intertwine", m.compressed_intertwine_residual);
  r.residual("kernel_identity", m.kernel_identity_residual);
  r.residual("extremal", m.extremal_residual);
  r.verdict("frame_unitary", m.frame_residual <= o.tol);
  r.verdict("intertwine", m.intertwine_residual <= o.tol);
  r.verdict("kernel_identity", m.kernel_identity_residual <= o.tol);
}

void cmd_poly_eval(const Options& o, Report& r, const Tolerance&) {
  if (o.poly.empty()) throw InputError("--poly is required");
  json j = read_json_file(o.input);
  MatrixTuple z = tuple_from_json(j);
  FreePoly p = parse_poly(o.poly, z.d());
  Mat v = eval_poly(p, z);
  r.body["inputs"]["poly"] = o.poly;
  r.body["points"] = json::array({{{"index", 0}, {"level", z.n()}, {"value", matrix_to_json(v)}}});
  r.body["results"] = {{"normal_form", print_poly(p)}, {"terms", p.terms.size()}, {"norm", norm_or_zero(v)}};
}

using Handler = void (*)(const Options&, Report&, const Tolerance&);

int run(const std::string& name, Handler h, const Options& o) {
  auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.body["command"] = name;
  json inputs = {{"seed", o.seed}, {"points", o.points}, {"radius", o.radius}, {"tol", o.tol}};
  try {
    if (!(o.radius > 0.0 && o.radius < 1.0)) throw InputError("--radius must lie in (0, 1)");
    if (o.points < 0) throw InputError("--points must be non-negative");
    if (!(o.tol > 0.0)) throw InputError("--tol must be positive");
    if (!o.input.empty()) {
      inputs["file"] = o.input;
      inputs["digest"] = input_digest(read_json_file(o.input));
    }
    r.body["inputs"] = inputs;
    r.body["residuals"] = json::object();
    r.body["verdicts"] = json::object();
    h(o, r, Tolerance{});
  } catch (const InputError& e) {
    std::cerr << "ncdbr " << name << ": " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "ncdbr " << name << ": " << to_string(e.kind()) << ": " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "ncdbr " << name << ": bad input: " << e.what() << "\n";
    return 2;
  }
  r.body["pass"] = r.pass;
  if (!o.omit_timing)
    r.body["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string text = r.body.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out);
    if (!f) {
      std::cerr << "ncdbr " << name << ": cannot write " << o.out << "\n";
      return 2;
    }
    f << text;
  }
  return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Characteristic functions and de Branges-Rovnyak models of row contractions"};
  app.require_subcommand(1);
  Options o;
  if (const char* env = std::getenv("NCDBR_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) {
      std::cerr << "ncdbr: NCDBR_TOL must be a positive number\n";
      return 2;
    }
    o.tol = v;
  }

  const std::vector<std::pair<std::string, Handler>> commands{
      {"cnc-check", cmd_cnc_check},       {"charfn", cmd_charfn},         {"compare-popescu", cmd_compare_popescu},
      {"kernel-psd", cmd_kernel_psd},     {"frostman", cmd_frostman},     {"roundtrip", cmd_roundtrip},
      {"model-verify", cmd_model_verify}, {"poly-eval", cmd_poly_eval},
  };
  std::vector<std::pair<CLI::App*, Handler>> subs;
  for (const auto& [name, h] : commands) {
    CLI::App* s = app.add_subcommand(name);
    s->add_option("--input", o.input, "tuple JSON file");
    s->add_option("--points", o.points, "number of sample points")->capture_default_str();
    s->add_option("--radius", o.radius, "row-norm radius of sample points")->capture_default_str();
    s->add_option("--seed", o.seed, "random seed")->capture_default_str();
    s->add_option("--max-len", o.max_len, "Fock truncation length (model-verify)");
    s->add_option("--tol", o.tol, "verdict tolerance (default 1e-8, or NCDBR_TOL)");
    s->add_option("--out", o.out, "report path (default stdout)");
    s->add_flag("--omit-timing", o.omit_timing, "leave wall_time_s out of the report");
    if (name == "poly-eval") s->add_option("--poly", o.poly, "free polynomial in z1..zd");
    subs.emplace_back(s, h);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  for (const auto& [s, h] : subs)
    if (s->parsed()) return run(s->get_name(), h, o);
  return 2;
}
