#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fractent/lattice.hpp"

namespace fractent {

/// Write to a sibling temp file, then rename over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

class Image {
 public:
  Image(int width, int height, Rgb fill = {255, 255, 255});
  int width() const { return w_; }
  int height() const { return h_; }
  void set(int x, int y, Rgb c);
  Rgb at(int x, int y) const;
  /// Binary P6.
  std::string to_ppm() const;

 private:
  int w_, h_;
  std::vector<Rgb> px_;
};

/// Perceptual-ish blue to yellow ramp, t clamped to [0, 1].
Rgb colormap(double t);

inline constexpr Rgb kAbsentColor{255, 255, 255};
inline constexpr Rgb kOutsideColor{200, 200, 200};

/// One scale x scale block per lattice coordinate, y = 0 at the bottom. Sites with
/// no value are drawn grey, missing coordinates white. Outlined sites get a black frame.
Image render_site_field(const Lattice& lattice, const std::vector<std::optional<double>>& values,
                        int scale = 4, const std::vector<std::uint8_t>* outline = nullptr);
Image render_mask(const Lattice& lattice, const std::vector<std::uint8_t>& mask, int scale = 4);

struct PlotSeries {
  std::vector<double> x;
  std::vector<double> y;
  Rgb color{0, 0, 0};
  bool line = false;
};

/// Scatter/line plot with a frame, optional log axes; no text.
Image render_plot(const std::vector<PlotSeries>& series, bool log_x = false, bool log_y = false,
                  int width = 480, int height = 360);

}  // namespace fractent
