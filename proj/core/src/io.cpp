#include "fractent/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "fractent/error.hpp"

namespace fractent {

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError(fmt::format("cannot write '{}'", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ValidationError(fmt::format("short write to '{}'", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalError("sha256 failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

Image::Image(int width, int height, Rgb fill) : w_(width), h_(height) {
  if (width < 1 || height < 1) throw ValidationError("image dimensions must be positive");
  px_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

void Image::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= w_ || y >= h_) return;
  px_[static_cast<std::size_t>(y) * w_ + x] = c;
}

Rgb Image::at(int x, int y) const { return px_.at(static_cast<std::size_t>(y) * w_ + x); }

std::string Image::to_ppm() const {
  std::string s = fmt::format("P6\n{} {}\n255\n", w_, h_);
  for (auto c : px_) {
    s.push_back(static_cast<char>(c.r));
    s.push_back(static_cast<char>(c.g));
    s.push_back(static_cast<char>(c.b));
  }
  return s;
}

Rgb colormap(double t) {
  // piecewise-linear through a short viridis-like palette
  static constexpr Rgb kStops[] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  if (!std::isfinite(t)) t = 0.0;
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int k = std::min(3, static_cast<int>(t));
  const double f = t - k;
  auto mix = [f](std::uint8_t a, std::uint8_t b) {
    return static_cast<std::uint8_t>(std::lround(a + (b - a) * f));
  };
  return {mix(kStops[k].r, kStops[k + 1].r), mix(kStops[k].g, kStops[k + 1].g),
          mix(kStops[k].b, kStops[k + 1].b)};
}

Image render_site_field(const Lattice& lat, const std::vector<std::optional<double>>& values,
                        int scale, const std::vector<std::uint8_t>* outline) {
  if (values.size() != lat.size()) throw ValidationError("render_site_field: value count mismatch");
  if (scale < 1) throw ValidationError("render_site_field: scale must be >= 1");
  double hi = 0.0;
  for (const auto& v : values)
    if (v) hi = std::max(hi, *v);
  const int W = lat.width();
  Image img(W * scale, W * scale, kAbsentColor);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const auto c = lat.coord(i);
    const Rgb col = values[i] ? colormap(hi > 0 ? *values[i] / hi : 0.0) : kOutsideColor;
    const bool frame = outline && (*outline)[i] && scale >= 3;
    const int x0 = c.x * scale;
    const int y0 = (W - 1 - c.y) * scale;
    for (int dy = 0; dy < scale; ++dy)
      for (int dx = 0; dx < scale; ++dx) {
        const bool edge = dx == 0 || dy == 0 || dx == scale - 1 || dy == scale - 1;
        img.set(x0 + dx, y0 + dy, frame && edge ? Rgb{0, 0, 0} : col);
      }
  }
  return img;
}

Image render_mask(const Lattice& lat, const std::vector<std::uint8_t>& mask, int scale) {
  std::vector<std::optional<double>> v(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) v[i] = mask.at(i) ? 1.0 : 0.0;
  return render_site_field(lat, v, scale);
}

Image render_plot(const std::vector<PlotSeries>& series, bool log_x, bool log_y, int width,
                  int height) {
  Image img(width, height, {255, 255, 255});
  const int margin = 24;
  auto tx = [log_x](double v) { return log_x ? std::log(v) : v; };
  auto ty = [log_y](double v) { return log_y ? std::log(v) : v; };
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      const double X = tx(s.x[i]), Y = ty(s.y[i]);
      if (!std::isfinite(X) || !std::isfinite(Y)) continue;
      xlo = std::min(xlo, X);
      xhi = std::max(xhi, X);
      ylo = std::min(ylo, Y);
      yhi = std::max(yhi, Y);
    }
  for (int x = margin; x <= width - margin; ++x) {
    img.set(x, margin, {0, 0, 0});
    img.set(x, height - margin, {0, 0, 0});
  }
  for (int y = margin; y <= height - margin; ++y) {
    img.set(margin, y, {0, 0, 0});
    img.set(width - margin, y, {0, 0, 0});
  }
  if (!(xhi >= xlo) || !(yhi >= ylo)) return img;
  if (xhi == xlo) xhi = xlo + 1.0;
  if (yhi == ylo) yhi = ylo + 1.0;
  auto px = [&](double X) {
    return margin + 4 + static_cast<int>(std::lround((X - xlo) / (xhi - xlo) * (width - 2 * margin - 8)));
  };
  auto py = [&](double Y) {
    return height - margin - 4 -
           static_cast<int>(std::lround((Y - ylo) / (yhi - ylo) * (height - 2 * margin - 8)));
  };
  for (const auto& s : series) {
    int prev_x = 0, prev_y = 0;
    bool have_prev = false;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      const double X = tx(s.x[i]), Y = ty(s.y[i]);
      if (!std::isfinite(X) || !std::isfinite(Y)) {
        have_prev = false;
        continue;
      }
      const int x = px(X), y = py(Y);
      if (s.line && have_prev) {
        const int steps = std::max(std::abs(x - prev_x), std::abs(y - prev_y));
        for (int k = 0; k <= steps; ++k) {
          const double f = steps ? static_cast<double>(k) / steps : 0.0;
          img.set(prev_x + static_cast<int>(std::lround(f * (x - prev_x))),
                  prev_y + static_cast<int>(std::lround(f * (y - prev_y))), s.color);
        }
      } else if (!s.line) {
        for (int dy = -2; dy <= 2; ++dy)
          for (int dx = -2; dx <= 2; ++dx) img.set(x + dx, y + dy, s.color);
      }
      prev_x = x;
      prev_y = y;
      have_prev = true;
    }
  }
  return img;
}

}  // namespace fractent
