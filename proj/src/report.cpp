#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vbpbb/analysis.hpp"
#include "vbpbb/error.hpp"

namespace vbpbb {
namespace {

using nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json range_json(const std::pair<double, double>& r) { return ordered_json::array({r.first, r.second}); }

void add_band_summary(ordered_json& j, const CiBand& band) {
  j["lower_range"] = range_json(band.lower_range);
  j["upper_range"] = range_json(band.upper_range);
  j["significant"] = band.significant;
  j["gap"] = band.gap;
  j["excludes_zero_everywhere"] = band.excludes_zero_everywhere;
}

ordered_json band_summary(const CiBand& band) {
  ordered_json j;
  add_band_summary(j, band);
  return j;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void close_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void write_band_rows(std::ostream& out, const std::string& label, const CiBand& band,
                     const char* method, double step_hours) {
  for (std::size_t s = 0; s < band.period_samples; ++s) {
    out << '"' << label << "\"," << s << ',' << format_number(static_cast<double>(s) * step_hours)
        << ',' << format_number(band.lower[s]) << ',' << format_number(band.median[s]) << ','
        << format_number(band.upper[s]) << ',' << method << '\n';
  }
}

constexpr const char* kBandHeader = "component,phase_index,phase_time_hours,lower,median,upper,method\n";

std::string slug(const std::string& label) {
  std::string out;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else if (!out.empty() && out.back() != '-')
      out += '-';
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out.empty() ? "component" : out;
}

// Two overlaid bands (PBB red, VBPBB blue) with their medians.
std::string band_svg(const std::string& title, const CiBand& vbpbb, const std::optional<CiBand>& pbb,
                     double step_hours) {
  constexpr double kWidth = 800, kHeight = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  const std::size_t p = vbpbb.period_samples;
  double lo = *std::min_element(vbpbb.lower.begin(), vbpbb.lower.end());
  double hi = *std::max_element(vbpbb.upper.begin(), vbpbb.upper.end());
  if (pbb) {
    lo = std::min(lo, *std::min_element(pbb->lower.begin(), pbb->lower.end()));
    hi = std::max(hi, *std::max_element(pbb->upper.begin(), pbb->upper.end()));
  }
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double span_x = p > 1 ? static_cast<double>(p - 1) : 1.0;
  auto x = [&](std::size_t s) { return kLeft + (kWidth - kLeft - kRight) * static_cast<double>(s) / span_x; };
  auto y = [&](double v) { return kTop + (kHeight - kTop - kBottom) * (hi - v) / (hi - lo); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
  auto polygon = [&](const CiBand& band, const char* fill) {
    svg << "<polygon fill=\"" << fill << "\" fill-opacity=\"0.35\" stroke=\"none\" points=\"";
    for (std::size_t s = 0; s < p; ++s) svg << format_number(x(s)) << ',' << format_number(y(band.upper[s])) << ' ';
    for (std::size_t s = p; s-- > 0;) svg << format_number(x(s)) << ',' << format_number(y(band.lower[s])) << ' ';
    svg << "\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"" << fill << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t s = 0; s < p; ++s) svg << format_number(x(s)) << ',' << format_number(y(band.median[s])) << ' ';
    svg << "\"/>\n";
  };
  if (pbb) polygon(*pbb, "#d62728");
  polygon(vbpbb, "#1f77b4");
  if (lo < 0.0 && hi > 0.0)
    svg << "<line x1=\"" << kLeft << "\" x2=\"" << kWidth - kRight << "\" y1=\"" << format_number(y(0.0))
        << "\" y2=\"" << format_number(y(0.0)) << "\" stroke=\"#555\" stroke-dasharray=\"4 3\"/>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
      << "\" height=\"" << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 4 << "\" text-anchor=\"end\">" << format_number(hi) << "</text>\n";
  svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << kHeight - kBottom << "\" text-anchor=\"end\">" << format_number(lo) << "</text>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"" << kHeight - kBottom + 18 << "\">0 h</text>\n";
  svg << "<text x=\"" << kWidth - kRight << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"end\">"
      << format_number(static_cast<double>(p - 1) * step_hours) << " h</text>\n";
  svg << "<text x=\"" << kLeft + 10 << "\" y=\"" << kHeight - 12 << "\" fill=\"#1f77b4\">VBPBB</text>\n";
  if (pbb) svg << "<text x=\"" << kLeft + 70 << "\" y=\"" << kHeight - 12 << "\" fill=\"#d62728\">PBB</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

} // namespace

std::string summary_json(const AnalysisResult& result) {
  const auto& cfg = result.config;
  ordered_json doc;
  doc["n_samples"] = result.n_samples;
  doc["start_time"] = format_timestamp(result.start_time);
  doc["step_hours"] = result.step_hours;
  doc["grand_mean"] = result.grand_mean;
  doc["B"] = cfg.replicates;
  doc["seed"] = cfg.seed;
  doc["alpha"] = cfg.alpha;
  doc["pbb_mode"] = to_string(cfg.pbb_mode);
  doc["filter"] = {{"m", result.plan.m},
                   {"k", result.plan.k},
                   {"rule", result.bandwidth_rule},
                   {"min_spacing", optional_number(result.plan.min_spacing)}};

  ordered_json components = ordered_json::array();
  for (const auto& c : result.components) {
    ordered_json j;
    j["component"] = c.spec.label;
    j["family"] = c.family;
    j["harmonic"] = c.spec.harmonic;
    j["period_samples"] = c.spec.period_samples;
    j["frequency"] = c.spec.frequency() / result.step_hours;  // 1/hours
    j["frequency_per_sample"] = c.spec.frequency();
    add_band_summary(j, c.vbpbb);
    j["width_ratio_vs_pbb"] = optional_number(c.width_ratio_vs_pbb);
    j["pbb"] = c.pbb ? band_summary(*c.pbb) : ordered_json(nullptr);
    components.push_back(std::move(j));
  }
  doc["components"] = std::move(components);

  ordered_json families = ordered_json::array();
  for (const auto& f : result.families) {
    ordered_json j;
    j["family"] = f.label;
    j["period_samples"] = f.period_samples;
    j["components"] = f.components;
    add_band_summary(j, f.vbpbb);
    j["width_ratio_vs_pbb"] = optional_number(f.width_ratio_vs_pbb);
    j["r_squared"] = optional_number(f.r_squared);
    families.push_back(std::move(j));
  }
  doc["families"] = std::move(families);

  if (result.combined) {
    const auto& c = *result.combined;
    ordered_json j;
    j["components"] = c.band.contributing_components;
    j["period_samples"] = c.band.band.period_samples;
    add_band_summary(j, c.band.band);
    j["r_squared"] = optional_number(c.r_squared);
    j["width_ratio_vs_pbb"] = optional_number(c.width_ratio_vs_pbb);
    doc["combined"] = std::move(j);
  } else {
    doc["combined"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

void emit_outputs(const AnalysisResult& result, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  const double step = result.step_hours;

  {
    const auto path = out_dir / "bands.csv";
    auto out = open_output(path);
    out << kBandHeader;
    for (const auto& c : result.components) write_band_rows(out, c.spec.label, c.vbpbb, "VBPBB", step);
    for (const auto& c : result.components)
      if (c.pbb) write_band_rows(out, c.spec.label, *c.pbb, "PBB", step);
    close_output(out, path);
  }
  {
    const auto path = out_dir / "families.csv";
    auto out = open_output(path);
    out << kBandHeader;
    for (const auto& f : result.families) write_band_rows(out, f.label, f.vbpbb, "VBPBB", step);
    for (const auto& f : result.families)
      if (f.pbb) write_band_rows(out, f.label, *f.pbb, "PBB", step);
    close_output(out, path);
  }
  {
    const auto path = out_dir / "combined.csv";
    auto out = open_output(path);
    out << kBandHeader;
    if (result.combined)
      write_band_rows(out, "combined", result.combined->band.band, "VBPBB", step);
    close_output(out, path);
  }
  {
    const auto path = out_dir / "summary.json";
    auto out = open_output(path);
    out << summary_json(result);
    close_output(out, path);
  }
  if (result.periodogram) {
    const auto path = out_dir / "periodogram.csv";
    auto out = open_output(path);
    out << "frequency_per_sample,frequency_per_hour,period_hours,power\n";
    const auto& sp = *result.periodogram;
    for (std::size_t j = 0; j < sp.frequencies.size(); ++j) {
      const double f = sp.frequencies[j];
      out << format_number(f) << ',' << format_number(f / step) << ',' << format_number(step / f) << ','
          << format_number(sp.power[j]) << '\n';
    }
    close_output(out, path);
  }
  if (result.config.plots) {
    const auto dir = out_dir / "plots";
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    for (const auto& c : result.components) {
      const auto path = dir / (slug(c.spec.label) + ".svg");
      auto out = open_output(path);
      out << band_svg(c.spec.label, c.vbpbb, c.pbb, step);
      close_output(out, path);
    }
    for (const auto& f : result.families) {
      const auto path = dir / ("family-" + slug(f.label) + ".svg");
      auto out = open_output(path);
      out << band_svg(f.label + " (all harmonics)", f.vbpbb, f.pbb, step);
      close_output(out, path);
    }
  }
}

} // namespace vbpbb
