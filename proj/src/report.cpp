#include "tgp/report.hpp"

#include <cstdlib>
#include <fstream>

#include "tgp/errors.hpp"

namespace tgp {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

std::string num(double v) { return std::isnan(v) ? "nan" : format_number(v); }

}  // namespace

std::filesystem::path output_path(const std::string& requested) {
  std::filesystem::path p(requested);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("TGP_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      p = std::filesystem::path(dir) / p;
    }
  }
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "': " + ec.message());
  }
  return p;
}

std::filesystem::path sibling(const std::filesystem::path& path, const std::string& extension) {
  std::filesystem::path p = path;
  p.replace_extension(extension);
  return p;
}

void write_records(const std::filesystem::path& path, const std::vector<OutputRecord>& records,
                   bool with_timestamp) {
  auto out = open_out(path);
  for (const auto& r : records) out << to_json(r, with_timestamp).dump() << '\n';
}

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryReport& report) {
  auto out = open_out(path);
  out << "t,energy,dissipation_mid\n";
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    const double d = k == 0 ? std::nan("") : report.dissipations[k - 1];
    out << num(report.times[k]) << ',' << num(report.energies[k]) << ',' << num(d) << '\n';
  }
}

void write_spectrum_csv(const std::filesystem::path& path, const SpectrumReport& spectrum) {
  auto out = open_out(path);
  out << "re,im\n";
  for (const auto& l : spectrum.eigenvalues) out << num(l.real()) << ',' << num(l.imag()) << '\n';
  out << "# abscissa," << num(spectrum.abscissa) << '\n';
}

void write_scan_csv(const std::filesystem::path& path, const ResolventScan& scan) {
  auto out = open_out(path);
  out << "lambda,norm\n";
  for (std::size_t i = 0; i < scan.lambdas.size(); ++i) out << num(scan.lambdas[i]) << ',' << num(scan.norms[i]) << '\n';
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep) {
  auto out = open_out(path);
  out << "index,label,bcs,wave_speed_ratio,abscissa,status\n";
  for (const auto& r : sweep.records) {
    std::string bcs;
    for (const auto& [k, v] : r.config) {
      if (k == "bcs") bcs = v;
    }
    out << r.index << ',' << r.results["label"].get<std::string>() << ',' << bcs << ','
        << num(r.results["wave_speed_ratio"].get<double>()) << ',' << num(r.results["abscissa"].get<double>()) << ','
        << (r.failure ? "FAILURE" : "ok") << '\n';
  }
}

void write_combo_csv(const std::filesystem::path& path, const ComboResult& combo) {
  auto out = open_out(path);
  out << "bcs,theta_law,xi_law,abscissa,status\n";
  for (const auto& r : combo.records) {
    std::string bcs;
    for (const auto& [k, v] : r.config) {
      if (k == "bcs") bcs = v;
    }
    out << bcs << ',' << r.results["theta_law"].get<std::string>() << ',' << r.results["xi_law"].get<std::string>()
        << ',' << num(r.results["abscissa"].get<double>()) << ',' << (r.failure ? "FAILURE" : "ok") << '\n';
  }
}

void write_combo_table(const std::filesystem::path& path, const ComboResult& combo) {
  auto out = open_out(path);
  const char* laws[] = {"GP", "F", "C", "CG"};
  out << "bcs,theta\\xi,GP,F,C,CG\n";
  for (std::size_t b = 0; b < combo.bcs.size(); ++b) {
    for (int i = 0; i < 4; ++i) {
      out << bcs_tag(combo.bcs[b]) << ',' << laws[i];
      for (int j = 0; j < 4; ++j) out << ',' << num(combo.abscissa[b][i][j]);
      out << '\n';
    }
  }
}

void write_cattaneo_csv(const std::filesystem::path& path, const CattaneoComparison& cmp) {
  auto out = open_out(path);
  out << "bcs,tau,varsigma,mismatch\n";
  for (std::size_t b = 0; b < cmp.bcs.size(); ++b) {
    const auto& r = cmp.records[b].results;
    out << bcs_tag(cmp.bcs[b]) << ',' << num(r["tau"].get<double>()) << ',' << num(r["varsigma"].get<double>()) << ','
        << num(cmp.mismatch[b]) << '\n';
  }
}

void write_limit_csv(const std::filesystem::path& path, const LimitReport& limit) {
  auto out = open_out(path);
  out << "eps,distance\n";
  for (std::size_t i = 0; i < limit.eps.size(); ++i) out << num(limit.eps[i]) << ',' << num(limit.distance[i]) << '\n';
}

void write_gnuplot(const std::filesystem::path& csv, const std::string& kind) {
  auto out = open_out(sibling(csv, ".gp"));
  const std::string file = csv.filename().string();
  out << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set terminal pngcairo size 900,600\n"
      << "set output '" << sibling(csv, ".png").filename().string() << "'\n";
  if (kind == "simulate") {
    out << "set logscale y\nset xlabel 't'\n"
        << "plot '" << file << "' using 1:2 with lines, '' using 1:3 with lines\n";
  } else if (kind == "spectrum") {
    out << "set xlabel 'Re'\nset ylabel 'Im'\n"
        << "plot '" << file << "' using 1:2 with points pt 7 ps 0.5\n";
  } else if (kind == "resolvent") {
    out << "set logscale xy\nset xlabel 'lambda'\nset ylabel 'resolvent norm'\n"
        << "plot '" << file << "' using 1:2 with linespoints\n";
  } else if (kind == "limit") {
    out << "set logscale xy\nset xlabel 'eps'\nset ylabel 'relative distance'\n"
        << "plot '" << file << "' using 1:2 with linespoints\n";
  } else if (kind == "sweep") {
    out << "set logscale x\nset xlabel 'rho1 b / (rho2 k)'\nset ylabel 'abscissa'\n"
        << "plot '" << file << "' using 4:5 with points pt 7\n";
  } else {
    out << "set style data histograms\nset ylabel 'value'\n"
        << "plot '" << file << "' using 4:xtic(2)\n";
  }
}

}  // namespace tgp
