// Command-line front end: generate, check, bound, construct and report on
// operator/frame documents. Exit codes follow a three-way protocol:
//   0  check passed / construction succeeded
//   1  check failed or a hypothesis was violated (report on stdout)
//   2  invalid input (error object on stderr)
// Seeded subcommands are deterministic: identical invocations produce
// identical bytes.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "kframe/codec.hpp"
#include "kframe/core.hpp"
#include "kframe/frames.hpp"
#include "kframe/kduals.hpp"
#include "kframe/kframes.hpp"
#include "kframe/opcore.hpp"
#include "kframe/rand.hpp"

using namespace kframe;
using nlohmann::json;

namespace {

struct Options {
  double tol_abs = 1e-9;
  double tol_rel = 1e-8;

  Tolerance tolerance() const {
    Tolerance t;
    t.eq_abs = tol_abs;
    t.eq_rel = tol_rel;
    require_valid(t);
    return t;
  }
};

json tolerances_json(const Tolerance& tol) {
  return json{{"rank_rel", tol.rank_rel},
              {"eq_abs", tol.eq_abs},
              {"eq_rel", tol.eq_rel}};
}

json base_report(const std::string& command, const Tolerance& tol) {
  return json{{"kind", "report"},
              {"command", command},
              {"tolerances", tolerances_json(tol)}};
}

void emit(const json& doc) { std::cout << dump_document(doc); }

json bounds_json(const FrameBounds& b) {
  return json{{"lower", b.lower}, {"upper", b.upper}};
}

Mat projector_onto_range_kstar(const Mat& k, const Tolerance& tol) {
  return orth_projector(k.adjoint(), tol);
}

json dilation_json(const DilationResult& d) {
  Mat basis(d.big_dim, static_cast<Index>(d.basis.size()));
  for (Index j = 0; j < basis.cols(); ++j)
    basis.col(j) = d.basis[static_cast<std::size_t>(j)];
  return json{{"big_dim", d.big_dim},
              {"basis", operator_to_json(basis)},
              {"projector", operator_to_json(d.projector)},
              {"embed", operator_to_json(d.embed)}};
}

int run_action(const std::string& command, const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == errc::invalid_input) {
      std::cerr << dump_document(json{{"kind", "error"},
                                      {"command", command},
                                      {"error", to_string(e.kind())},
                                      {"detail", e.what()}});
      return 2;
    }
    emit(json{{"kind", "report"},
              {"command", command},
              {"pass", false},
              {"error", to_string(e.kind())},
              {"detail", e.what()}});
    return 1;
  } catch (const std::exception& e) {
    std::cerr << dump_document(
        json{{"kind", "error"}, {"command", command}, {"detail", e.what()}});
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional frame and K-frame toolkit"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--tol-abs", opt.tol_abs, "absolute comparison tolerance");
  app.add_option("--tol-rel", opt.tol_rel, "relative comparison tolerance");

  std::string command;
  std::function<int()> action;
  auto set_action = [&](CLI::App* cmd, const std::string& name,
                        std::function<int()> fn) {
    cmd->callback([&command, &action, name, fn]() {
      command = name;
      action = fn;
    });
  };

  std::string k_path, frame_path, dual_path, z_path, u_path, p_path, w_path;
  std::string out_path, out_k_path, out_proj_path;
  std::uint64_t seed = 0;
  long n = 0, m = 0;
  std::string k_spec;
  bool tight = false;
  double a_value = 0.0;
  int samples = 100;

  // ---- gen ------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate documents");
  gen->require_subcommand(1);

  auto* gen_op = gen->add_subcommand("operator", "operator from a k-spec");
  gen_op->add_option("--n", n, "dimension")->required();
  gen_op->add_option("--k-spec", k_spec,
                     "identity|diag:<csv>|random|scaled-unitary:<c>|projection:<r>")
      ->required();
  gen_op->add_option("--seed", seed, "rng seed")->required();
  gen_op->add_option("--out", out_path, "output path")->required();
  set_action(gen_op, "gen operator", [&]() {
    const Tolerance tol = opt.tolerance();
    Rng rng(seed);
    const Mat k = operator_from_spec(k_spec, n, rng);
    save_document(operator_to_json(k), out_path);
    json rep = base_report("gen operator", tol);
    rep["k_spec"] = k_spec;
    rep["n"] = n;
    rep["seed"] = seed;
    rep["pass"] = true;
    emit(rep);
    return 0;
  });

  auto* gen_frame = gen->add_subcommand("frame", "random frame");
  gen_frame->add_option("--n", n, "dimension")->required();
  gen_frame->add_option("--m", m, "vector count")->required();
  gen_frame->add_option("--seed", seed, "rng seed")->required();
  gen_frame->add_option("--out", out_path, "output path")->required();
  set_action(gen_frame, "gen frame", [&]() {
    const Tolerance tol = opt.tolerance();
    if (n < 1 || m < 1)
      throw Error(errc::invalid_input, "n and m must be positive");
    Rng rng(seed);
    const FrameSystem f = frame_from_synthesis(gaussian_matrix(rng, n, m));
    save_document(frame_to_json(f), out_path);
    json rep = base_report("gen frame", tol);
    rep["n"] = n;
    rep["m"] = m;
    rep["seed"] = seed;
    rep["pass"] = true;
    emit(rep);
    return 0;
  });

  auto* gen_pk = gen->add_subcommand("parseval-kframe",
                                     "seeded random Parseval K-frame");
  gen_pk->add_option("--n", n, "dimension")->required();
  gen_pk->add_option("--m", m, "vector count")->required();
  gen_pk->add_option("--k-spec", k_spec, "operator spec for K")->required();
  gen_pk->add_option("--seed", seed, "rng seed")->required();
  gen_pk->add_option("--out", out_path, "frame output path")->required();
  gen_pk->add_option("--out-k", out_k_path, "also write K here");
  set_action(gen_pk, "gen parseval-kframe", [&]() {
    const Tolerance tol = opt.tolerance();
    Rng rng(seed);
    const Mat k = operator_from_spec(k_spec, n, rng);
    const KFrameInstance inst = random_parseval_kframe(k, m, rng());
    save_document(frame_to_json(inst.frame), out_path);
    if (!out_k_path.empty()) save_document(operator_to_json(k), out_k_path);
    const FrameOperators ops = operators_of(inst.frame);
    json rep = base_report("gen parseval-kframe", tol);
    rep["k_spec"] = k_spec;
    rep["n"] = n;
    rep["m"] = m;
    rep["seed"] = seed;
    rep["residual"] = fnorm(ops.frame_op - k * k.adjoint());
    rep["pass"] = true;
    emit(rep);
    return 0;
  });

  // ---- check ----------------------------------------------------------
  auto* check = app.add_subcommand("check", "verify a property");
  check->require_subcommand(1);

  auto* check_frame = check->add_subcommand("frame", "spanning frame test");
  check_frame->add_option("--frame", frame_path)->required();
  set_action(check_frame, "check frame", [&]() {
    const Tolerance tol = opt.tolerance();
    const FrameSystem f = load_frame(frame_path);
    const FrameBounds b = frame_bounds(f, tol);
    json rep = base_report("check frame", tol);
    rep["bounds"] = bounds_json(b);
    rep["pass"] = b.lower > 0.0;
    emit(rep);
    return b.lower > 0.0 ? 0 : 1;
  });

  auto* check_parseval = check->add_subcommand("parseval", "frame operator == I");
  check_parseval->add_option("--frame", frame_path)->required();
  set_action(check_parseval, "check parseval", [&]() {
    const Tolerance tol = opt.tolerance();
    const FrameSystem f = load_frame(frame_path);
    const FrameOperators ops = operators_of(f);
    const bool ok = is_parseval(f, tol);
    json rep = base_report("check parseval", tol);
    rep["residual"] = fnorm(ops.frame_op - identity(f.dim));
    rep["pass"] = ok;
    emit(rep);
    return ok ? 0 : 1;
  });

  auto* check_en = check->add_subcommand("equal-norm", "all norms equal");
  check_en->add_option("--frame", frame_path)->required();
  set_action(check_en, "check equal-norm", [&]() {
    const Tolerance tol = opt.tolerance();
    const FrameSystem f = load_frame(frame_path);
    const EqualNormResult r = is_equal_norm(f, tol);
    json rep = base_report("check equal-norm", tol);
    rep["c"] = r.c;
    rep["pass"] = r.equal_norm;
    emit(rep);
    return r.equal_norm ? 0 : 1;
  });

  auto* check_kframe = check->add_subcommand("kframe", "K-frame membership");
  check_kframe->add_option("--k", k_path)->required();
  check_kframe->add_option("--frame", frame_path)->required();
  set_action(check_kframe, "check kframe", [&]() {
    const Tolerance tol = opt.tolerance();
    const KFrameInstance inst{load_operator(k_path), load_frame(frame_path)};
    const FrameBounds b = kframe_bounds(inst, tol);
    json rep = base_report("check kframe", tol);
    rep["bounds"] = bounds_json(b);
    rep["pass"] = b.lower > 0.0;
    emit(rep);
    return b.lower > 0.0 ? 0 : 1;
  });

  auto* check_pk = check->add_subcommand("parseval-kframe", "S == K K*");
  check_pk->add_option("--k", k_path)->required();
  check_pk->add_option("--frame", frame_path)->required();
  set_action(check_pk, "check parseval-kframe", [&]() {
    const Tolerance tol = opt.tolerance();
    const KFrameInstance inst{load_operator(k_path), load_frame(frame_path)};
    const FrameOperators ops = operators_of(inst.frame);
    const bool ok = is_parseval_kframe(inst, tol);
    json rep = base_report("check parseval-kframe", tol);
    rep["residual"] = fnorm(ops.frame_op - inst.k * inst.k.adjoint());
    rep["pass"] = ok;
    emit(rep);
    return ok ? 0 : 1;
  });

  auto* check_kdual = check->add_subcommand("kdual", "T Theta* == K");
  check_kdual->add_option("--k", k_path)->required();
  check_kdual->add_option("--frame", frame_path)->required();
  check_kdual->add_option("--dual", dual_path)->required();
  set_action(check_kdual, "check kdual", [&]() {
    const Tolerance tol = opt.tolerance();
    const DualPair pair = is_kdual(load_operator(k_path), load_frame(frame_path),
                                   load_frame(dual_path), tol);
    json rep = base_report("check kdual", tol);
    rep["residual"] = pair.residual;
    rep["recon_residual"] = pair.recon_residual;
    rep["kstar_lower_bound"] = pair.kstar_lower;
    rep["pass"] = pair.accepted;
    emit(rep);
    return pair.accepted ? 0 : 1;
  });

  // ---- bounds ---------------------------------------------------------
  auto* bounds = app.add_subcommand("bounds", "optimal frame constants");
  bounds->require_subcommand(1);

  auto* bounds_frame = bounds->add_subcommand("frame");
  bounds_frame->add_option("--frame", frame_path)->required();
  set_action(bounds_frame, "bounds frame", [&]() {
    const Tolerance tol = opt.tolerance();
    const FrameBounds b = frame_bounds(load_frame(frame_path), tol);
    json rep = base_report("bounds frame", tol);
    rep["bounds"] = bounds_json(b);
    rep["pass"] = true;
    emit(rep);
    return 0;
  });

  auto* bounds_kframe = bounds->add_subcommand("kframe");
  bounds_kframe->add_option("--k", k_path)->required();
  bounds_kframe->add_option("--frame", frame_path)->required();
  set_action(bounds_kframe, "bounds kframe", [&]() {
    const Tolerance tol = opt.tolerance();
    const KFrameInstance inst{load_operator(k_path), load_frame(frame_path)};
    const FrameBounds b = kframe_bounds(inst, tol);
    json rep = base_report("bounds kframe", tol);
    rep["bounds"] = bounds_json(b);
    rep["pass"] = true;
    emit(rep);
    return 0;
  });

  // ---- construct --------------------------------------------------------
  auto* construct = app.add_subcommand("construct", "build derived objects");
  construct->require_subcommand(1);

  auto* c_canon = construct->add_subcommand("canonical-parseval");
  c_canon->add_option("--k", k_path)->required();
  c_canon->add_option("--frame", frame_path)->required();
  c_canon->add_option("--out", out_path)->required();
  c_canon->add_option("--out-projector", out_proj_path);
  set_action(c_canon, "construct canonical-parseval", [&]() {
    const Tolerance tol = opt.tolerance();
    const KFrameInstance inst{load_operator(k_path), load_frame(frame_path)};
    const CanonicalParseval cp = canonical_parseval(inst, tol);
    save_document(frame_to_json(cp.frame), out_path);
    if (!out_proj_path.empty())
      save_document(operator_to_json(cp.projector), out_proj_path);
    json rep = base_report("construct canonical-parseval", tol);
    rep["range_dim"] = cp.projector.trace().real();
    rep["pass"] = true;
    emit(rep);
    return 0;
  });

  auto* c_extend = construct->add_subcommand("extend-knorm");
  c_extend->add_option("--k", k_path)->required();
  c_extend->add_option("--frame", frame_path)->required();
  c_extend->add_flag("--tight", tight);
  c_extend->add_option("--out", out_path)->required();
  set_action(c_extend, "construct extend-knorm", [&]() {
    const Tolerance tol = opt.tolerance();
    const Mat k = load_operator(k_path);
    const KFrameInstance out =
        extend_to_knorm(k, load_frame(frame_path), tight, tol);
    save_document(frame_to_json(out.frame), out_path);
    json rep = base_report("construct extend-knorm", tol);
    rep["tight"] = tight;
    rep["count"] = out.frame.count();
    rep["knorm"] = opnorm(k);
    rep["pass"] = true;
    emit(rep);
    return 0;
  });

  auto* c_dilate = construct->add_subcommand("dilate");
  c_dilate->add_option("--frame", frame_path)->required();
  c_dilate->add_option("--out", out_path)->required();
  set_action(c_dilate, "construct dilate", [&]() {
    const Tolerance tol = opt.tolerance();
    const FrameSystem f = load_frame(frame_path);
    const DilationResult d = naimark_dilate(f, tol);
    double max_resid = 0.0;
    for (Index j = 0; j < f.count(); ++j) {
      const Vec lhs = d.projector * d.basis[static_cast<std::size_t>(j)];
      const Vec rhs = d.embed * f.vectors[static_cast<std::size_t>(j)];
      max_resid = std::max(max_resid, (lhs - rhs).norm());
    }
    json out = base_report("construct dilate", tol);
    out["dilation"] = dilation_json(d);
    out["max_residual"] = max_resid;
    out["pass"] = max_resid <= tol.eq_abs;
    save_document(out, out_path);
    emit(out);
    return max_resid <= tol.eq_abs ? 0 : 1;
  });

  auto* c_kdilate = construct->add_subcommand("k-dilate");
  c_kdilate->add_option("--k", k_path)->required();
  c_kdilate->add_option("--frame", frame_path)->required();
  c_kdilate->add_option("--out", out_path)->required();
  set_action(c_kdilate, "construct k-dilate", [&]() {
    const Tolerance tol = opt.tolerance();
    const KFrameInstance inst{load_operator(k_path), load_frame(frame_path)};
    const DilationResult d = kframe_dilation(inst, tol);
    double max_resid = 0.0;
    for (Index j = 0; j < inst.frame.count(); ++j) {
      const Vec rhs = inst.k * (d.embed.adjoint() *
                                (d.projector * d.basis[static_cast<std::size_t>(j)]));
      max_resid = std::max(
          max_resid, (inst.frame.vectors[static_cast<std::size_t>(j)] - rhs).norm());
    }
    json out = base_report("construct k-dilate", tol);
    out["dilation"] = dilation_json(d);
    out["max_residual"] = max_resid;
    out["pass"] = max_resid <= tol.eq_abs;
    save_document(out, out_path);
    emit(out);
    return max_resid <= tol.eq_abs ? 0 : 1;
  });

  auto* c_kdual = construct->add_subcommand("kdual");
  c_kdual->add_option("--k", k_path)->required();
  c_kdual->add_option("--frame", frame_path)->required();
  c_kdual->add_option("--z", z_path, "free-parameter operator (dim x count)");
  c_kdual->add_option("--out", out_path)->required();
  set_action(c_kdual, "construct kdual", [&]() {
    const Tolerance tol = opt.tolerance();
    const Mat k = load_operator(k_path);
    const FrameSystem f = load_frame(frame_path);
    const Mat z = z_path.empty() ? Mat::Zero(f.dim, f.count()).eval()
                                 : load_operator(z_path);
    const FrameSystem g = kdual_family(k, f, z, tol);
    save_document(frame_to_json(g), out_path);
    const Mat t = synthesis(f);
    const Mat v = synthesis(g);
    json rep = base_report("construct kdual", tol);
    rep["residual"] = fnorm(t * v.adjoint() - k);
    rep["canonical"] = z_path.empty();
    rep["pass"] = true;
    emit(rep);
    return 0;
  });

  auto* c_endual = construct->add_subcommand("equal-norm-dual");
  c_endual->add_option("--k", k_path)->required();
  c_endual->add_option("--frame", frame_path)->required();
  c_endual->add_option("--a", a_value, "nonzero scale of the isometry part")
      ->required();
  c_endual->add_option("--u", u_path, "partial isometry document (operator)");
  auto* endual_seed = c_endual->add_option("--seed", seed, "search seed");
  c_endual->add_option("--out", out_path)->required();
  set_action(c_endual, "construct equal-norm-dual", [&]() {
    const Tolerance tol = opt.tolerance();
    if (u_path.empty() && endual_seed->count() == 0)
      throw Error(errc::invalid_input,
                  "--seed is required when no --u is supplied");
    std::optional<Mat> u;
    if (!u_path.empty()) u = load_operator(u_path);
    const EqualNormDual r = equal_norm_dual(load_operator(k_path),
                                            load_frame(frame_path), a_value, u,
                                            tol, seed);
    save_document(frame_to_json(r.dual), out_path);
    json rep = base_report("construct equal-norm-dual", tol);
    rep["a"] = r.report.a;
    rep["norms"] = r.report.norms;
    rep["max_norm_spread"] = r.report.max_norm_spread;
    rep["formula_value"] = r.report.formula_value;
    rep["formula_applies"] = r.report.formula_applies;
    rep["duality_residual"] = r.report.duality_residual;
    rep["pass"] = true;
    emit(rep);
    return 0;
  });

  auto* c_f2s = construct->add_subcommand("frame-to-subspace");
  c_f2s->add_option("--k", k_path)->required();
  c_f2s->add_option("--frame", frame_path)->required();
  c_f2s->add_option("--p", p_path, "projector onto range(K*); computed if omitted");
  c_f2s->add_option("--out", out_path)->required();
  set_action(c_f2s, "construct frame-to-subspace", [&]() {
    const Tolerance tol = opt.tolerance();
    const Mat k = load_operator(k_path);
    const Mat p = p_path.empty() ? projector_onto_range_kstar(k, tol)
                                 : load_operator(p_path);
    const Subspace s = frame_to_subspace(k, p, load_frame(frame_path), tol);
    save_document(subspace_to_json(s), out_path);
    json rep = base_report("construct frame-to-subspace", tol);
    rep["subspace_dim"] = s.dim();
    rep["pass"] = true;
    emit(rep);
    return 0;
  });

  auto* c_s2f = construct->add_subcommand("subspace-to-frame");
  c_s2f->add_option("--k", k_path)->required();
  c_s2f->add_option("--w", w_path, "subspace document")->required();
  c_s2f->add_option("--p", p_path, "projector onto range(K*); computed if omitted");
  c_s2f->add_option("--out", out_path)->required();
  set_action(c_s2f, "construct subspace-to-frame", [&]() {
    const Tolerance tol = opt.tolerance();
    const Mat k = load_operator(k_path);
    const Mat p = p_path.empty() ? projector_onto_range_kstar(k, tol)
                                 : load_operator(p_path);
    const FrameSystem f = subspace_to_frame(k, p, load_subspace(w_path), tol);
    save_document(frame_to_json(f), out_path);
    json rep = base_report("construct subspace-to-frame", tol);
    rep["count"] = f.count();
    rep["pass"] = true;
    emit(rep);
    return 0;
  });

  // ---- report -----------------------------------------------------------
  auto* report = app.add_subcommand("report", "numerical reports");
  report->require_subcommand(1);

  auto* r_trace = report->add_subcommand("trace-eigen");
  r_trace->add_option("--k", k_path)->required();
  r_trace->add_option("--frame", frame_path)->required();
  set_action(r_trace, "report trace-eigen", [&]() {
    const Tolerance tol = opt.tolerance();
    const KFrameInstance inst{load_operator(k_path), load_frame(frame_path)};
    const SpectralReport sr = trace_eigen_report(inst, tol);
    json rep = base_report("report trace-eigen", tol);
    rep["eigenvalues"] = sr.eigenvalues;
    rep["sum_norms_sq"] = sr.sum_norms_sq;
    rep["n_knorm_sq"] = sr.n_knorm_sq;
    rep["trace_kkstar"] = sr.trace_kkstar;
    rep["eigen_claim_holds"] = sr.eigen_claim_holds;
    rep["regime_scalar_kkstar"] = sr.regime_scalar_kkstar;
    rep["pass"] = true;
    emit(rep);
    return 0;
  });

  auto* r_err = report->add_subcommand("error-identity");
  r_err->add_option("--k", k_path)->required();
  r_err->add_option("--frame", frame_path)->required();
  r_err->add_option("--dual", dual_path)->required();
  r_err->add_option("--samples", samples, "number of sample vectors");
  set_action(r_err, "report error-identity", [&]() {
    const Tolerance tol = opt.tolerance();
    const ErrorIdentityReport er =
        error_identity_report(load_operator(k_path), load_frame(frame_path),
                              load_frame(dual_path), tol, samples);
    json rep = base_report("report error-identity", tol);
    rep["samples"] = samples;
    rep["max_identity_residual"] = er.max_identity_residual;
    rep["op_distance_sq"] = er.op_distance_sq;
    rep["lower_bound"] = er.lower_bound;
    rep["upper_bound"] = er.upper_bound;
    rep["lower_vacuous"] = er.lower_vacuous;
    rep["within_bounds"] = er.within_bounds;
    rep["pass"] = er.identity_ok;
    emit(rep);
    return er.identity_ok ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << dump_document(json{{"kind", "error"},
                                    {"error", "invalid-input"},
                                    {"detail", e.what()}});
    return 2;
  }

  if (!action) return 2;
  return run_action(command, action);
}
