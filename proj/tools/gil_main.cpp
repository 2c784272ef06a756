// gil command-line front end: instability certificates, decay-rate sweeps,
// frame-penalty reports, and plot-ready field dumps.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "gil/gil.hpp"

using json = nlohmann::ordered_json;
using namespace gil;

namespace {

std::vector<double> parse_a_range(const std::string& text) {
  double start = 0, stop = 0, step = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3)
    throw CLI::ValidationError("--a-range", "expected start:stop:step");
  if (!(step > 0.0) || !(start > 0.0) || stop < start)
    throw CLI::ValidationError("--a-range", "need 0 < start <= stop and step > 0");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    double v = start + step * i;
    if (v > stop + 1e-12) break;
    if (std::abs(v - stop) <= 1e-12) v = stop;
    out.push_back(v);
  }
  return out;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_text_file(out_path, content);
}

json meta_block(const std::string& command, const json& config) {
  return json{{"tool", "gil"}, {"version", kVersion}, {"command", command}, {"config", config}};
}

json grid_json(const GridSpec& g) {
  return json{{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min},
              {"y_max", g.y_max}, {"nx", g.nx},       {"ny", g.ny}};
}

json certificate_json(const BoundCertificate& c, const GridSpec& g) {
  return json{{"a", c.a},
              {"measured_l2", c.measured_l2},
              {"measured_dx_l2", c.measured_dx_l2},
              {"measured_dy_l2", c.measured_dy_l2},
              {"measured_w12", c.measured_w12},
              {"bound_l2", c.bound_l2},
              {"bound_dx", c.bound_dx},
              {"bound_dy", c.bound_dy},
              {"pass_l2", c.pass_l2},
              {"pass_dx", c.pass_dx},
              {"pass_dy", c.pass_dy},
              {"singular_node_count", c.singular_node_count},
              {"grid", grid_json(g)}};
}

json penalty_report_json(const PenaltyReport& r) {
  return json{{"a", r.a},
              {"penalty_plus", r.penalty_plus},
              {"penalty_minus", r.penalty_minus},
              {"difference", r.difference},
              {"envelope_bound", r.envelope_bound},
              {"pass", r.pass}};
}

json rate_fit_json(const RateFit& f) {
  return json{{"k_hat", f.k_hat},
              {"log_c_hat", f.log_c_hat},
              {"r_squared", f.r_squared},
              {"a_values", f.a_values},
              {"distances", f.distances}};
}

int fail_with_report(const std::string& out_path, const std::string& command,
                     const std::vector<std::string>& failures, const json& config) {
  json doc{{"meta", meta_block(command, config)}, {"failures", failures}};
  std::string payload = doc.dump(2) + "\n";
  if (out_path.empty())
    std::cerr << payload;
  else
    write_text_file(out_path + ".failures.json", payload);
  std::cerr << "gil " << command << ": " << failures.size() << " assertion(s) failed\n";
  return 1;
}

MetaBlock csv_meta(const std::string& command, const json& config) {
  MetaBlock meta;
  meta.emplace_back("command", command);
  for (const auto& [k, v] : config.items())
    meta.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
  return meta;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gabor phase-retrieval instability lab"};
  app.require_subcommand(1);

  // common state
  double a_single = 1.0;
  std::string a_range_text;
  double grid_h = 1.0 / 32.0;
  std::string out_path;
  std::string format = "json";

  // pair-demo
  auto* pair_demo = app.add_subcommand("pair-demo", "dump |Vf+|, |Vf-| and their difference");
  pair_demo->add_option("--a", a_single, "separation parameter")->required();
  pair_demo->add_option("--grid-h", grid_h, "grid spacing (default 1/32)");
  pair_demo->add_option("--out", out_path, "output prefix")->required();

  // certify
  auto* certify_cmd = app.add_subcommand("certify", "verify the norm bounds at one separation");
  certify_cmd->add_option("--a", a_single, "separation parameter")->required();
  certify_cmd->add_option("--grid-h", grid_h, "grid spacing (default 1/32)");
  certify_cmd->add_option("--out", out_path, "output path (default stdout)");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "certificates and decay-rate fit over a range");
  sweep_cmd->add_option("--a-range", a_range_text, "start:stop:step (inclusive)")->required();
  sweep_cmd->add_option("--grid-h", grid_h, "grid spacing (default 1/32)");
  sweep_cmd->add_option("--out", out_path, "output prefix")->required();

  // frames-stft
  StftFrameSpec stft_spec;
  int stft_m = 3;
  std::string dump_coeffs;
  auto* stft_cmd = app.add_subcommand("frames-stft", "lattice-penalty report for the pair");
  stft_cmd->add_option("--a", a_single, "separation parameter")->required();
  stft_cmd->add_option("--m", stft_m, "decay order (must exceed s p + 1)");
  stft_cmd->add_option("--s", stft_spec.s, "weight exponent");
  stft_cmd->add_option("--p", stft_spec.p, "l^p exponent in [1,2]");
  stft_cmd->add_option("--x0", stft_spec.x0, "time lattice step");
  stft_cmd->add_option("--y0", stft_spec.y0, "frequency lattice step");
  stft_cmd->add_option("--n-range", stft_spec.n_range, "time truncation bound");
  stft_cmd->add_option("--k-range", stft_spec.k_range, "frequency truncation bound");
  stft_cmd->add_option("--out", out_path, "output path (default stdout)");
  stft_cmd->add_option("--dump-coeffs", dump_coeffs, "CSV dump of the pair coefficients");

  // frames-wavelet
  WaveletSpec wav_spec;
  wav_spec.beta = 0.5;
  wav_spec.m = 2;
  wav_spec.p = 2.0;
  wav_spec.j_max = 7;
  wav_spec.k_max = 2048;
  auto* wav_cmd = app.add_subcommand("frames-wavelet", "wavelet-penalty report for the pair");
  wav_cmd->add_option("--a", a_single, "separation parameter")->required();
  wav_cmd->add_option("--m", wav_spec.m, "vanishing moments");
  wav_cmd->add_option("--alpha", wav_spec.alpha, "scale base (> 1)");
  wav_cmd->add_option("--beta", wav_spec.beta, "translation step");
  wav_cmd->add_option("--s", wav_spec.s, "smoothness weight");
  wav_cmd->add_option("--p", wav_spec.p, "l^p exponent in [1,2]");
  wav_cmd->add_option("--j-max", wav_spec.j_max, "scale truncation");
  wav_cmd->add_option("--k-max", wav_spec.k_max, "translation truncation");
  wav_cmd->add_option("--out", out_path, "output path (default stdout)");
  wav_cmd->add_option("--dump-coeffs", dump_coeffs, "CSV dump of the pair coefficients");

  // escape
  double radius = 1.0, norm_cap = 1.0;
  auto* escape_cmd = app.add_subcommand("escape", "norm-bounded signal escaping a ball");
  escape_cmd->add_option("--radius", radius, "ball radius")->required();
  escape_cmd->add_option("--L", norm_cap, "norm bound");
  escape_cmd->add_option("--out", out_path, "output path (default stdout)");

  // report
  auto* report_cmd = app.add_subcommand("report", "aggregate certificates + rate + ratios");
  report_cmd->add_option("--a-range", a_range_text, "start:stop:step (inclusive)")->required();
  report_cmd->add_option("--grid-h", grid_h, "grid spacing (default 1/32)");
  report_cmd->add_option("--out", out_path, "output path (default stdout)");
  report_cmd->add_option("--format", format, "json (default) or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*pair_demo) {
      SeparationParam a(a_single);
      json config{{"a", a_single}, {"grid_h", grid_h}};
      GridSpec grid = GridSpec::default_for(a_single, grid_h);
      auto [plus, minus] = sample_pair_fields(a, grid);
      std::vector<double> diff(plus.values.size());
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = plus.values[i] - minus.values[i];
      MetaBlock meta = csv_meta("pair-demo", config);
      write_field_csv(out_path + "_plus.csv", plus, meta);
      write_field_csv(out_path + "_minus.csv", minus, meta);
      write_text_file(out_path + "_diff.csv",
                      grid_csv(grid, {{"value", &diff}}, meta));
      return 0;
    }

    if (*certify_cmd) {
      SeparationParam a(a_single);
      json config{{"a", a_single}, {"grid_h", grid_h}};
      GridSpec grid = GridSpec::default_for(a_single, grid_h);
      BoundCertificate cert = certify(a, grid);
      json doc{{"meta", meta_block("certify", config)},
               {"certificate", certificate_json(cert, grid)}};
      emit(out_path, doc.dump(2) + "\n");
      if (!cert.all_pass())
        return fail_with_report(out_path, "certify", {"bound certificate failed"}, config);
      return 0;
    }

    if (*sweep_cmd) {
      std::vector<double> a_values = parse_a_range(a_range_text);
      json config{{"a_range", a_range_text}, {"grid_h", grid_h}};
      std::vector<BoundCertificate> certs(a_values.size());
      std::vector<double> ratios(a_values.size());
      parallel_for(a_values.size(), [&](std::size_t i) {
        GridSpec grid = GridSpec::default_for(a_values[i], grid_h);
        certs[i] = certify(SeparationParam(a_values[i]), grid);
        ratios[i] = std::pow(2.0, 0.75) / certs[i].measured_w12;
      });
      std::vector<std::string> failures;
      for (const auto& c : certs)
        if (!c.all_pass())
          failures.push_back("bound certificate failed at a=" + format_shortest(c.a));
      MetaBlock meta = csv_meta("sweep", config);
      write_text_file(out_path + ".csv", sweep_csv(certs, ratios, meta));
      if (a_values.size() >= 3) {
        std::vector<double> w12(certs.size());
        for (std::size_t i = 0; i < certs.size(); ++i) w12[i] = certs[i].measured_w12;
        RateFit fit = fit_rate(a_values, w12);
        json doc{{"meta", meta_block("sweep", config)}, {"rate_fit", rate_fit_json(fit)}};
        write_text_file(out_path + "_ratefit.json", doc.dump(2) + "\n");
        if (fit.k_hat < 1.45)
          failures.push_back("fitted decay rate " + format_shortest(fit.k_hat) + " below 1.45");
      }
      if (!failures.empty()) return fail_with_report(out_path, "sweep", failures, config);
      return 0;
    }

    if (*stft_cmd) {
      SeparationParam a(a_single);
      json config{{"a", a_single},         {"m", stft_m},
                  {"s", stft_spec.s},      {"p", stft_spec.p},
                  {"x0", stft_spec.x0},    {"y0", stft_spec.y0},
                  {"n_range", stft_spec.n_range}, {"k_range", stft_spec.k_range}};
      PenaltyReport rep = stft_penalty_difference(a, stft_spec, stft_m);
      json doc{{"meta", meta_block("frames-stft", config)}, {"report", penalty_report_json(rep)}};
      emit(out_path, doc.dump(2) + "\n");
      if (!dump_coeffs.empty()) {
        auto [fp, fm] = make_pair(a);
        std::string csv = "# gil ";
        csv += kVersion;
        csv += "\n";
        for (const auto& [k, v] : csv_meta("frames-stft", config)) csv += "# " + k + "=" + v + "\n";
        csv += "n,k,re,im\n";
        for (int n = -stft_spec.n_range; n <= stft_spec.n_range; ++n)
          for (int k = -stft_spec.k_range; k <= stft_spec.k_range; ++k) {
            complexd c = stft_coeff(fp, n, k, stft_spec);
            csv += std::to_string(n) + "," + std::to_string(k) + "," + format_shortest(c.real()) +
                   "," + format_shortest(c.imag()) + "\n";
          }
        write_text_file(dump_coeffs, csv);
      }
      if (!rep.pass)
        return fail_with_report(out_path, "frames-stft", {"penalty difference exceeds bound"},
                                config);
      return 0;
    }

    if (*wav_cmd) {
      SeparationParam a(a_single);
      json config{{"a", a_single},          {"m", wav_spec.m},     {"alpha", wav_spec.alpha},
                  {"beta", wav_spec.beta},  {"s", wav_spec.s},     {"p", wav_spec.p},
                  {"j_max", wav_spec.j_max}, {"k_max", wav_spec.k_max}};
      PenaltyReport rep = wavelet_penalty_difference(a, wav_spec);
      json doc{{"meta", meta_block("frames-wavelet", config)},
               {"report", penalty_report_json(rep)}};
      emit(out_path, doc.dump(2) + "\n");
      if (!dump_coeffs.empty()) {
        auto [fp, fm] = make_pair(a);
        std::string csv = "# gil ";
        csv += kVersion;
        csv += "\n";
        for (const auto& [k, v] : csv_meta("frames-wavelet", config))
          csv += "# " + k + "=" + v + "\n";
        csv += "j,k,coeff\n";
        for (int j = 0; j <= wav_spec.j_max; ++j)
          for (int k = -wav_spec.k_max; k <= wav_spec.k_max; ++k) {
            double c = wavelet_coeff(fp, j, k, wav_spec);
            if (c != 0.0)
              csv += std::to_string(j) + "," + std::to_string(k) + "," + format_shortest(c) + "\n";
          }
        write_text_file(dump_coeffs, csv);
      }
      if (!rep.pass)
        return fail_with_report(out_path, "frames-wavelet", {"penalty difference exceeds bound"},
                                config);
      return 0;
    }

    if (*escape_cmd) {
      json config{{"radius", radius}, {"L", norm_cap}};
      auto [witness, fraction] = escape_witness(radius, norm_cap);
      bool pass = fraction < 1e-6;
      json doc{{"meta", meta_block("escape", config)},
               {"witness",
                json{{"shift", witness.terms().front().shift},
                     {"coeff", witness.terms().front().coeff.real()},
                     {"inside_fraction", fraction},
                     {"pass", pass}}}};
      emit(out_path, doc.dump(2) + "\n");
      if (!pass)
        return fail_with_report(out_path, "escape", {"inside-energy fraction not < 1e-6"}, config);
      return 0;
    }

    if (*report_cmd) {
      std::vector<double> a_values = parse_a_range(a_range_text);
      json config{{"a_range", a_range_text}, {"grid_h", grid_h}, {"format", format}};
      std::vector<BoundCertificate> certs(a_values.size());
      std::vector<GridSpec> grids;
      grids.reserve(a_values.size());
      for (double a : a_values) grids.push_back(GridSpec::default_for(a, grid_h));
      parallel_for(a_values.size(), [&](std::size_t i) {
        certs[i] = certify(SeparationParam(a_values[i]), grids[i]);
      });
      std::vector<double> ratios(certs.size()), w12(certs.size());
      for (std::size_t i = 0; i < certs.size(); ++i) {
        w12[i] = certs[i].measured_w12;
        ratios[i] = std::pow(2.0, 0.75) / w12[i];
      }
      if (format == "csv") {
        emit(out_path, sweep_csv(certs, ratios, csv_meta("report", config)));
      } else {
        json jcerts = json::array();
        for (std::size_t i = 0; i < certs.size(); ++i)
          jcerts.push_back(certificate_json(certs[i], grids[i]));
        json jratios = json::array();
        for (std::size_t i = 0; i < certs.size(); ++i)
          jratios.push_back(json{{"a", certs[i].a}, {"ratio", ratios[i]}});
        json doc{{"meta", meta_block("report", config)}, {"certificates", jcerts}};
        if (a_values.size() >= 3)
          doc["rate_fit"] = rate_fit_json(fit_rate(a_values, w12));
        doc["stability"] = jratios;
        emit(out_path, doc.dump(2) + "\n");
      }
      std::vector<std::string> failures;
      for (const auto& c : certs)
        if (!c.all_pass())
          failures.push_back("bound certificate failed at a=" + format_shortest(c.a));
      if (!failures.empty()) return fail_with_report(out_path, "report", failures, config);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "gil: " << e.what() << "\n";
    return 2;
  } catch (const TruncationError& e) {
    std::cerr << "gil: " << e.what() << " (head=" << e.head() << ", tail=" << e.tail() << ")\n";
    json doc{{"failures", {std::string(e.what())}}};
    if (!out_path.empty()) write_text_file(out_path + ".failures.json", doc.dump(2) + "\n");
    return 1;
  } catch (const OutOfRangeError& e) {
    std::cerr << "gil: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "gil: invalid arguments: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gil: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
