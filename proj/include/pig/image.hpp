#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "pig/common.hpp"

namespace pig {

// H x W x 3 raster with values in [0, 1], interleaved RGB.
struct Image {
  int height = 0;
  int width = 0;
  std::vector<double> data;  // height * width * 3

  static constexpr int kChannels = 3;

  static Image zeros(int h, int w) {
    Image img;
    img.height = h;
    img.width = w;
    img.data.assign(static_cast<std::size_t>(h) * w * kChannels, 0.0);
    return img;
  }

  double& at(int y, int x, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * kChannels + c];
  }
  double at(int y, int x, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * kChannels + c];
  }

  bool same_extent(const Image& other) const {
    return height == other.height && width == other.width;
  }
};

// H x W class ids in [0, C) plus kIgnoreLabel.
struct LabelMap {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;  // height * width

  static LabelMap filled(int h, int w, std::uint8_t value) {
    LabelMap lm;
    lm.height = h;
    lm.width = w;
    lm.data.assign(static_cast<std::size_t>(h) * w, value);
    return lm;
  }

  std::uint8_t& at(int y, int x) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t at(int y, int x) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
};

// H x W values in {0, 1}.
struct BinaryMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;

  static BinaryMask filled(int h, int w, std::uint8_t value) {
    BinaryMask m;
    m.height = h;
    m.width = w;
    m.data.assign(static_cast<std::size_t>(h) * w, value);
    return m;
  }

  std::uint8_t& at(int y, int x) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t at(int y, int x) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
};

// C x H x W per-pixel probabilities, channel-major.
struct SoftPrediction {
  int num_classes = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;  // num_classes * height * width

  static SoftPrediction zeros(int c, int h, int w) {
    SoftPrediction p;
    p.num_classes = c;
    p.height = h;
    p.width = w;
    p.data.assign(static_cast<std::size_t>(c) * h * w, 0.0);
    return p;
  }

  double& at(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  double at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
};

inline void validate_image(const Image& img, const char* what = "image") {
  require(img.height >= 2 && img.width >= 2, what,
          ": extent must be at least 2x2, got ", img.height, "x", img.width);
  require(img.height % 2 == 0 && img.width % 2 == 0, what,
          ": extent must be even, got ", img.height, "x", img.width);
  require(img.data.size() ==
              static_cast<std::size_t>(img.height) * img.width * 3,
          what, ": storage size does not match extent");
  for (double v : img.data) {
    require(std::isfinite(v), what, ": non-finite pixel value");
    require(v >= 0.0 && v <= 1.0, what, ": pixel value ", v,
            " outside [0,1]");
  }
}

inline void validate_label(const LabelMap& lm, int num_classes,
                           const char* what = "label") {
  require(lm.data.size() == static_cast<std::size_t>(lm.height) * lm.width,
          what, ": storage size does not match extent");
  for (int y = 0; y < lm.height; ++y) {
    for (int x = 0; x < lm.width; ++x) {
      const std::uint8_t v = lm.at(y, x);
      if (v != kIgnoreLabel && v >= num_classes) {
        fail(what, ": invalid class id ", static_cast<int>(v), " at pixel (",
             y, ",", x, ") with num_classes=", num_classes);
      }
    }
  }
}

inline void validate_soft_prediction(const SoftPrediction& p,
                                     double tol = 1e-5) {
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      double sum = 0.0;
      for (int c = 0; c < p.num_classes; ++c) {
        const double v = p.at(c, y, x);
        require(v >= 0.0 && v <= 1.0,
                "soft prediction: probability outside [0,1]");
        sum += v;
      }
      require(std::abs(sum - 1.0) <= tol,
              "soft prediction: channel sum ", sum, " at pixel (", y, ",", x,
              ") deviates from 1");
    }
  }
}

// Per-pixel argmax; ties resolve to the lowest class id.
inline LabelMap argmax_label(const SoftPrediction& p) {
  LabelMap lm = LabelMap::filled(p.height, p.width, 0);
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      int best = 0;
      double best_v = p.at(0, y, x);
      for (int c = 1; c < p.num_classes; ++c) {
        const double v = p.at(c, y, x);
        if (v > best_v) {
          best_v = v;
          best = c;
        }
      }
      lm.at(y, x) = static_cast<std::uint8_t>(best);
    }
  }
  return lm;
}

// Per-pixel max probability of the argmax class.
inline std::vector<double> max_probability(const SoftPrediction& p) {
  std::vector<double> out(static_cast<std::size_t>(p.height) * p.width);
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      double best = p.at(0, y, x);
      for (int c = 1; c < p.num_classes; ++c) {
        best = std::max(best, p.at(c, y, x));
      }
      out[static_cast<std::size_t>(y) * p.width + x] = best;
    }
  }
  return out;
}

// Bilinear resample to a new extent. Used by the optional canonical-resize
// hook in similarity scoring and by plot rendering.
inline Image resize_bilinear(const Image& src, int new_h, int new_w) {
  require(new_h >= 1 && new_w >= 1, "resize: target extent must be positive");
  Image out = Image::zeros(new_h, new_w);
  const double sy = static_cast<double>(src.height) / new_h;
  const double sx = static_cast<double>(src.width) / new_w;
  for (int y = 0; y < new_h; ++y) {
    const double fy = std::min((y + 0.5) * sy - 0.5,
                               static_cast<double>(src.height - 1));
    const int y0 = std::max(0, static_cast<int>(std::floor(fy)));
    const int y1 = std::min(src.height - 1, y0 + 1);
    const double wy = std::max(0.0, fy - y0);
    for (int x = 0; x < new_w; ++x) {
      const double fx = std::min((x + 0.5) * sx - 0.5,
                                 static_cast<double>(src.width - 1));
      const int x0 = std::max(0, static_cast<int>(std::floor(fx)));
      const int x1 = std::min(src.width - 1, x0 + 1);
      const double wx = std::max(0.0, fx - x0);
      for (int c = 0; c < 3; ++c) {
        const double top =
            src.at(y0, x0, c) * (1.0 - wx) + src.at(y0, x1, c) * wx;
        const double bot =
            src.at(y1, x0, c) * (1.0 - wx) + src.at(y1, x1, c) * wx;
        out.at(y, x, c) = top * (1.0 - wy) + bot * wy;
      }
    }
  }
  return out;
}

inline LabelMap resize_nearest(const LabelMap& src, int new_h, int new_w) {
  require(new_h >= 1 && new_w >= 1, "resize: target extent must be positive");
  LabelMap out = LabelMap::filled(new_h, new_w, 0);
  for (int y = 0; y < new_h; ++y) {
    const int sy = std::min(src.height - 1,
                            static_cast<int>((y + 0.5) * src.height / new_h));
    for (int x = 0; x < new_w; ++x) {
      const int sx = std::min(src.width - 1,
                              static_cast<int>((x + 0.5) * src.width / new_w));
      out.at(y, x) = src.at(sy, sx);
    }
  }
  return out;
}

}  // namespace pig
