#pragma once

#include <array>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "pig/dataset.hpp"
#include "pig/image.hpp"
#include "pig/io.hpp"

namespace pig {

// Fixed class roles of the procedural scenes. Ids beyond kSign render as
// generic scattered objects.
enum SyntheticClass : int {
  kRoad = 0,
  kSky = 1,
  kBuilding = 2,
  kSidewalk = 3,
  kVegetation = 4,
  kWall = 5,
  kPole = 6,
  kSign = 7,
};

inline std::vector<std::string> synthetic_class_names(int num_classes) {
  static const std::vector<std::string> base = {
      "road", "sky", "building", "sidewalk",
      "vegetation", "wall", "pole", "sign"};
  std::vector<std::string> names;
  for (int c = 0; c < num_classes; ++c) {
    if (c < static_cast<int>(base.size())) names.push_back(base[c]);
    else names.push_back(cat("object", c));
  }
  return names;
}

struct SyntheticConfig {
  std::uint64_t seed = 0;
  int n_samples = 20;
  int size = 64;
  int num_classes = 8;
  // Classes whose night rendering deliberately departs from the day
  // appearance; everything else keeps its structure under a darkening remap.
  std::set<int> low_similarity_classes;
  std::string out_root;

  static std::set<int> default_low_similarity(int num_classes) {
    std::set<int> s = {kSky};
    if (num_classes > kVegetation) s.insert(kVegetation);
    return s;
  }
};

struct SyntheticScene {
  Image day;
  LabelMap label;
  Image night;
};

namespace detail {

inline std::array<double, 3> synthetic_day_color(int c) {
  switch (c) {
    case kRoad: return {0.30, 0.30, 0.33};
    case kSky: return {0.62, 0.78, 0.95};
    case kBuilding: return {0.55, 0.45, 0.40};
    case kSidewalk: return {0.48, 0.45, 0.42};
    case kVegetation: return {0.18, 0.52, 0.22};
    case kWall: return {0.64, 0.58, 0.46};
    case kPole: return {0.50, 0.50, 0.52};
    case kSign: return {0.88, 0.78, 0.20};
    default: {
      // generic objects: stable distinct hues
      const double t = 0.15 + 0.8 * ((c * 37) % 13) / 13.0;
      return {0.25 + 0.5 * t, 0.65 - 0.4 * t, 0.35 + 0.3 * ((c * 17) % 7) / 7.0};
    }
  }
}

// Per-class night appearance shift. Low-similarity classes get a remap that
// destroys the day structure (inverted luminance for sky, a cross-channel
// swap otherwise); the rest darken with a stable per-class factor so that
// pixel structure survives into the night image.
inline std::array<double, 3> synthetic_night_remap(
    int c, const std::array<double, 3>& v, bool low_similarity) {
  std::array<double, 3> out;
  if (low_similarity) {
    if (c == kSky) {
      for (int i = 0; i < 3; ++i) out[i] = 0.92 * (1.0 - v[i]);
    } else {
      out[0] = 0.05 + 0.20 * v[2];
      out[1] = 0.04 + 0.10 * v[0];
      out[2] = 0.22 + 0.55 * v[1];
    }
  } else if (c == kSign) {
    // retro-reflective: stays bright at night
    out = {0.85 * v[0] + 0.05, 0.85 * v[1] + 0.04, 0.85 * v[2]};
  } else {
    const double d = 0.50 + 0.25 * ((c * 2654435761u) % 97) / 97.0;
    out = {d * v[0] + 0.01, d * v[1] + 0.01, d * v[2] + 0.05};
  }
  for (int i = 0; i < 3; ++i) out[i] = std::clamp(out[i], 0.0, 1.0);
  return out;
}

inline void fill_rect(LabelMap& lm, int y0, int y1, int x0, int x1, int c) {
  y0 = std::max(0, y0);
  x0 = std::max(0, x0);
  y1 = std::min(lm.height, y1);
  x1 = std::min(lm.width, x1);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      lm.at(y, x) = static_cast<std::uint8_t>(c);
    }
  }
}

inline void fill_ellipse(LabelMap& lm, int cy, int cx, int ry, int rx, int c) {
  for (int y = std::max(0, cy - ry); y < std::min(lm.height, cy + ry + 1); ++y) {
    for (int x = std::max(0, cx - rx); x < std::min(lm.width, cx + rx + 1); ++x) {
      const double dy = static_cast<double>(y - cy) / std::max(1, ry);
      const double dx = static_cast<double>(x - cx) / std::max(1, rx);
      if (dy * dy + dx * dx <= 1.0) {
        lm.at(y, x) = static_cast<std::uint8_t>(c);
      }
    }
  }
}

}  // namespace detail

// Renders one layered scene: sky band over a blocked building skyline, a
// sidewalk strip, a road band, vegetation blobs, wall patches, poles with
// signs, and generic objects for any extra class ids. The night variant
// re-renders identical geometry through per-class appearance remaps.
inline SyntheticScene render_synthetic_scene(
    std::uint64_t seed, int sample_index, int size, int num_classes,
    const std::set<int>& low_similarity_classes) {
  require(size >= 16 && size % 2 == 0,
          "render_synthetic_scene: size must be even and >= 16, got ", size);
  require(num_classes >= 4, "render_synthetic_scene: need num_classes >= 4");
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(sample_index)));
  const int h = size, w = size;

  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * rng.uniform01();
  };

  LabelMap label = LabelMap::filled(h, w, kSky);
  const int sky_end = std::clamp(static_cast<int>(h * u(0.22, 0.38)), 2, h - 8);
  const int road_start = std::clamp(static_cast<int>(h * u(0.62, 0.78)),
                                    sky_end + 4, h - 4);
  const int sidewalk_h = num_classes > kSidewalk ? std::max(2, h / 12) : 0;
  const int sidewalk_start = road_start - sidewalk_h;

  // building skyline in blocks with jittered tops
  const int n_blocks = 3 + rng.uniform_int(4);
  std::vector<double> block_shade(static_cast<std::size_t>(w), 1.0);
  {
    int x = 0;
    for (int b = 0; b < n_blocks && x < w; ++b) {
      const int bw = std::max(4, (w - x) / std::max(1, n_blocks - b) +
                                     rng.uniform_int(5) - 2);
      const int top = std::clamp(sky_end + rng.uniform_int(h / 8) - h / 16, 2,
                                 sidewalk_start - 2);
      const double shade = 0.82 + 0.36 * rng.uniform01();
      detail::fill_rect(label, top, sidewalk_start, x, x + bw, kBuilding);
      for (int xx = x; xx < std::min(w, x + bw); ++xx) block_shade[xx] = shade;
      x += bw;
    }
  }
  if (sidewalk_h > 0) {
    detail::fill_rect(label, sidewalk_start, road_start, 0, w, kSidewalk);
  }
  detail::fill_rect(label, road_start, h, 0, w, kRoad);

  if (num_classes > kVegetation) {
    const int n_blobs = 1 + rng.uniform_int(3);
    for (int i = 0; i < n_blobs; ++i) {
      const int cy = sky_end + rng.uniform_int(h / 6) - h / 12;
      const int cx = rng.uniform_int(w);
      detail::fill_ellipse(label, cy, cx, std::max(2, h / 16 + rng.uniform_int(h / 16)),
                           std::max(2, w / 14 + rng.uniform_int(w / 10)),
                           kVegetation);
    }
  }
  if (num_classes > kWall) {
    const int n_rect = 1 + rng.uniform_int(2);
    for (int i = 0; i < n_rect; ++i) {
      const int band = std::max(4, sidewalk_start - sky_end);
      const int y0 = sky_end + rng.uniform_int(std::max(1, band / 2));
      const int rh = std::max(2, band / 4 + rng.uniform_int(std::max(1, band / 4)));
      const int x0 = rng.uniform_int(w);
      const int rw = std::max(3, w / 10 + rng.uniform_int(w / 6));
      detail::fill_rect(label, y0, y0 + rh, x0, x0 + rw, kWall);
    }
  }
  for (int c = 8; c < num_classes; ++c) {
    const int n_obj = 1 + rng.uniform_int(2);
    for (int i = 0; i < n_obj; ++i) {
      const int oh = std::max(3, h / 16 + rng.uniform_int(h / 12));
      const int ow = std::max(3, w / 14 + rng.uniform_int(w / 8));
      const int y0 = sky_end + rng.uniform_int(std::max(1, h - sky_end - oh));
      const int x0 = rng.uniform_int(std::max(1, w - ow));
      detail::fill_rect(label, y0, y0 + oh, x0, x0 + ow, c);
    }
  }
  if (num_classes > kPole) {
    const int n_poles = 2 + rng.uniform_int(3);
    const int pw = std::max(1, w / 48);
    for (int i = 0; i < n_poles; ++i) {
      const int ph = std::max(4, h / 8 + rng.uniform_int(h / 10));
      const int x0 = rng.uniform_int(std::max(1, w - pw));
      detail::fill_rect(label, road_start - ph, road_start, x0, x0 + pw, kPole);
      if (num_classes > kSign && (i == 0 || rng.coin())) {
        const int s = std::max(2, w / 20);
        detail::fill_rect(label, road_start - ph - s / 2, road_start - ph + s / 2,
                          x0 + pw / 2 - s / 2, x0 + pw / 2 + s / 2 + 1, kSign);
      }
    }
  }

  // paint day and night from the label; identical geometry, per-class remap
  Image day = Image::zeros(h, w);
  Image night = Image::zeros(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int c = label.at(y, x);
      std::array<double, 3> base = detail::synthetic_day_color(c);
      if (c == kBuilding) {
        for (auto& v : base) v *= block_shade[x];
      }
      const double n_day = u(-0.06, 0.06);
      std::array<double, 3> dpx;
      for (int ch = 0; ch < 3; ++ch) {
        dpx[ch] = std::clamp(base[ch] + n_day, 0.0, 1.0);
        day.at(y, x, ch) = dpx[ch];
      }
      const bool low_sim = low_similarity_classes.count(c) > 0;
      auto npx = detail::synthetic_night_remap(c, dpx, low_sim);
      const double n_night = u(-0.02, 0.02);
      for (int ch = 0; ch < 3; ++ch) {
        night.at(y, x, ch) = std::clamp(npx[ch] + n_night, 0.0, 1.0);
      }
    }
  }
  return {std::move(day), std::move(label), std::move(night)};
}

// Writes the dataset layout under out_root:
//   day/images, day/labels            (SOURCE_DAY)
//   night/images                      (TARGET_NIGHT, unlabeled)
//   night/hidden_labels               (held-out evaluation only)
// Returns the day and night manifests. Deterministic given the seed.
inline std::pair<DatasetManifest, DatasetManifest> generate_synthetic_dataset(
    const SyntheticConfig& config) {
  namespace fs = std::filesystem;
  require(config.size % 2 == 0, "generate_synthetic_dataset: size must be even, got ",
          config.size);
  require(config.num_classes >= 4,
          "generate_synthetic_dataset: need num_classes >= 4");
  require(config.n_samples >= 1, "generate_synthetic_dataset: need n_samples >= 1");
  require(!config.out_root.empty(), "generate_synthetic_dataset: out_root not set");

  std::set<int> low_sim = config.low_similarity_classes.empty()
                              ? SyntheticConfig::default_low_similarity(
                                    config.num_classes)
                              : config.low_similarity_classes;

  const fs::path root(config.out_root);
  for (int i = 0; i < config.n_samples; ++i) {
    SyntheticScene scene = render_synthetic_scene(
        config.seed, i, config.size, config.num_classes, low_sim);
    char name[32];
    std::snprintf(name, sizeof(name), "%04d.png", i);
    save_image((root / "day" / "images" / name).string(), scene.day);
    save_label((root / "day" / "labels" / name).string(), scene.label);
    save_image((root / "night" / "images" / name).string(), scene.night);
    save_label((root / "night" / "hidden_labels" / name).string(), scene.label);
  }

  auto day = load_dataset((root / "day").string(), DomainTag::SOURCE_DAY,
                          config.num_classes);
  auto night = load_dataset((root / "night").string(), DomainTag::TARGET_NIGHT,
                            config.num_classes);
  day.class_names = synthetic_class_names(config.num_classes);
  night.class_names = day.class_names;
  day.save((root / "day" / "manifest.txt").string());
  night.save((root / "night" / "manifest.txt").string());
  return {std::move(day), std::move(night)};
}

}  // namespace pig
