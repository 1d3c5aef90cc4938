#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "spectral/distill.hpp"
#include "spectral/scaling.hpp"
#include "spectral/spectrum.hpp"
#include "spectral/theory.hpp"

namespace spectral {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// `k,power,count` with one row per bin, LF endings.
std::string spectrum_to_csv(const RadialSpectrum& s);
RadialSpectrum spectrum_from_csv(std::string_view text);

/// Two whitespace-separated columns: log(k) log(power). Zero-power bins omitted.
std::string spectrum_plot_data(const RadialSpectrum& s);

nlohmann::ordered_json to_json(const PowerLawFit& f);
nlohmann::ordered_json to_json(const CorrelationFit& f);
nlohmann::ordered_json to_json(const InvarianceReport& r);
nlohmann::ordered_json to_json(const DepthReport& r);
nlohmann::ordered_json to_json(const LossReport& r, CpsVariant variant, double epsilon);

/// Serialized JSON text with a trailing newline. Doubles are printed in
/// shortest round-trip form, so output is byte-stable.
std::string dump_json(const nlohmann::ordered_json& j);

/// Writes to a sibling temporary file and renames it into place, so a failed
/// run never leaves a partial output.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace spectral
