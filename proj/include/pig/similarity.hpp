#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "pig/dataset.hpp"
#include "pig/image.hpp"

namespace pig {

// Keeps x_S pixels where y_S equals the class, zero elsewhere. Returns
// nullopt when the class has no pixels, signalling exclusion from the
// current iteration's ranking.
inline std::optional<Image> extract_single_class(const Image& x_s,
                                                 const LabelMap& y_s,
                                                 int class_id) {
  require(x_s.height == y_s.height && x_s.width == y_s.width,
          "extract_single_class: image/label extent mismatch");
  require(class_id >= 0 && class_id < kIgnoreLabel,
          "extract_single_class: invalid class id ", class_id);
  bool found = false;
  Image out = Image::zeros(x_s.height, x_s.width);
  for (int y = 0; y < x_s.height; ++y) {
    for (int x = 0; x < x_s.width; ++x) {
      if (y_s.at(y, x) == class_id) {
        found = true;
        for (int c = 0; c < 3; ++c) out.at(y, x, c) = x_s.at(y, x, c);
      }
    }
  }
  if (!found) return std::nullopt;
  return out;
}

enum class SimilarityKind { PERCEPTUAL, SSIM, PSNR };

inline const char* similarity_kind_name(SimilarityKind k) {
  switch (k) {
    case SimilarityKind::PERCEPTUAL: return "perceptual";
    case SimilarityKind::SSIM: return "ssim";
    case SimilarityKind::PSNR: return "psnr";
  }
  return "?";
}

inline SimilarityKind parse_similarity_kind(const std::string& s) {
  if (s == "perceptual" || s == "lpips") return SimilarityKind::PERCEPTUAL;
  if (s == "ssim") return SimilarityKind::SSIM;
  if (s == "psnr") return SimilarityKind::PSNR;
  fail("unknown similarity backend '", s, "'");
}

// All backends expose the canonical orientation: higher score means fewer
// domain similarities. SSIM and PSNR natively measure similarity, so their
// raw values are negated.
struct SimilarityBackend {
  SimilarityKind kind = SimilarityKind::PERCEPTUAL;
  int ssim_window = 11;
  std::uint64_t perceptual_seed = 0;
  std::vector<int> perceptual_channels = {8, 16, 24};
  int canonical_size = 0;  // 0 = score at native extent
  double psnr_cap_db = 100.0;

  static SimilarityBackend perceptual(std::uint64_t seed = 0) {
    SimilarityBackend b;
    b.kind = SimilarityKind::PERCEPTUAL;
    b.perceptual_seed = seed;
    return b;
  }
  static SimilarityBackend ssim(int window = 11) {
    SimilarityBackend b;
    b.kind = SimilarityKind::SSIM;
    b.ssim_window = window;
    return b;
  }
  static SimilarityBackend psnr() {
    SimilarityBackend b;
    b.kind = SimilarityKind::PSNR;
    return b;
  }

  std::string identity() const {
    switch (kind) {
      case SimilarityKind::PERCEPTUAL: {
        std::string ch;
        for (std::size_t i = 0; i < perceptual_channels.size(); ++i) {
          ch += (i ? "-" : "") + std::to_string(perceptual_channels[i]);
        }
        return cat("perceptual(seed=", perceptual_seed, ",channels=", ch,
                   canonical_size > 0 ? cat(",canonical=", canonical_size) : "",
                   ")");
      }
      case SimilarityKind::SSIM:
        return cat("ssim(window=", ssim_window, ")");
      case SimilarityKind::PSNR:
        return cat("psnr(cap=", psnr_cap_db, "dB)");
    }
    return "?";
  }
};

// Immutable scorer; construction materializes the perceptual feature stack
// so repeated scoring reuses the same fixed weights.
class SimilarityScorer {
public:
  explicit SimilarityScorer(SimilarityBackend backend = SimilarityBackend())
      : backend_(std::move(backend)) {
    require(backend_.ssim_window >= 1, "ssim window must be >= 1");
    if (backend_.kind == SimilarityKind::PERCEPTUAL) {
      int in_ch = 3;
      int layer_idx = 0;
      for (int out_ch : backend_.perceptual_channels) {
        ConvLayer layer;
        layer.in_ch = in_ch;
        layer.out_ch = out_ch;
        layer.weights.resize(static_cast<std::size_t>(out_ch) * in_ch * 9);
        Rng rng(mix_seed(backend_.perceptual_seed,
                         static_cast<std::uint64_t>(layer_idx)));
        const double stddev = std::sqrt(2.0 / (in_ch * 9));
        for (auto& w : layer.weights) w = rng.normal(0.0, stddev);
        layers_.push_back(std::move(layer));
        in_ch = out_ch;
        ++layer_idx;
      }
    }
  }

  const SimilarityBackend& backend() const { return backend_; }

  // Canonical score: higher = fewer domain similarities.
  double score(const Image& a, const Image& b) const {
    require(a.same_extent(b), "score: extent mismatch ", a.height, "x",
            a.width, " vs ", b.height, "x", b.width);
    const Image* pa = &a;
    const Image* pb = &b;
    Image ra, rb;
    if (backend_.canonical_size > 0 &&
        (a.height != backend_.canonical_size ||
         a.width != backend_.canonical_size)) {
      ra = resize_bilinear(a, backend_.canonical_size, backend_.canonical_size);
      rb = resize_bilinear(b, backend_.canonical_size, backend_.canonical_size);
      pa = &ra;
      pb = &rb;
    }
    switch (backend_.kind) {
      case SimilarityKind::PERCEPTUAL:
        return perceptual_distance(*pa, *pb);
      case SimilarityKind::SSIM:
        return -raw_ssim(*pa, *pb);
      case SimilarityKind::PSNR:
        return -raw_psnr(*pa, *pb);
    }
    fail("score: unreachable");
  }

  // Backend-native value (SSIM in [-1,1], PSNR in dB, perceptual distance).
  double raw_score(const Image& a, const Image& b) const {
    switch (backend_.kind) {
      case SimilarityKind::SSIM: return raw_ssim(a, b);
      case SimilarityKind::PSNR: return raw_psnr(a, b);
      case SimilarityKind::PERCEPTUAL: return perceptual_distance(a, b);
    }
    fail("raw_score: unreachable");
  }

private:
  struct ConvLayer {
    int in_ch = 0;
    int out_ch = 0;
    std::vector<double> weights;  // out*in*3*3
  };

  struct FeatureMap {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;  // CHW
    double at(int c, int y, int x) const {
      return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    double& at(int c, int y, int x) {
      return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
  };

  // 3x3 stride-2 conv (zero padded) + ReLU
  FeatureMap conv_relu(const FeatureMap& in, const ConvLayer& layer) const {
    FeatureMap out;
    out.channels = layer.out_ch;
    out.height = (in.height + 1) / 2;
    out.width = (in.width + 1) / 2;
    out.data.assign(
        static_cast<std::size_t>(out.channels) * out.height * out.width, 0.0);
    for (int oc = 0; oc < layer.out_ch; ++oc) {
      for (int oy = 0; oy < out.height; ++oy) {
        for (int ox = 0; ox < out.width; ++ox) {
          double acc = 0.0;
          const int cy = oy * 2, cx = ox * 2;
          for (int ic = 0; ic < layer.in_ch; ++ic) {
            for (int ky = -1; ky <= 1; ++ky) {
              const int yy = cy + ky;
              if (yy < 0 || yy >= in.height) continue;
              for (int kx = -1; kx <= 1; ++kx) {
                const int xx = cx + kx;
                if (xx < 0 || xx >= in.width) continue;
                acc += layer.weights[((static_cast<std::size_t>(oc) *
                                           layer.in_ch +
                                       ic) *
                                          3 +
                                      (ky + 1)) *
                                         3 +
                                     (kx + 1)] *
                       in.at(ic, yy, xx);
              }
            }
          }
          out.at(oc, oy, ox) = acc > 0.0 ? acc : 0.0;
        }
      }
    }
    return out;
  }

  static void unit_normalize_channels(FeatureMap& f) {
    for (int y = 0; y < f.height; ++y) {
      for (int x = 0; x < f.width; ++x) {
        double norm = 0.0;
        for (int c = 0; c < f.channels; ++c) {
          const double v = f.at(c, y, x);
          norm += v * v;
        }
        norm = std::sqrt(norm) + 1e-10;
        for (int c = 0; c < f.channels; ++c) f.at(c, y, x) /= norm;
      }
    }
  }

  // Averaged squared differences of unit-normalized feature stacks, summed
  // over layers: the LPIPS computation graph with fixed random weights.
  double perceptual_distance(const Image& a, const Image& b) const {
    FeatureMap fa = to_feature(a);
    FeatureMap fb = to_feature(b);
    double total = 0.0;
    for (const auto& layer : layers_) {
      fa = conv_relu(fa, layer);
      fb = conv_relu(fb, layer);
      FeatureMap na = fa, nb = fb;
      unit_normalize_channels(na);
      unit_normalize_channels(nb);
      double acc = 0.0;
      for (std::size_t i = 0; i < na.data.size(); ++i) {
        const double d = na.data[i] - nb.data[i];
        acc += d * d;
      }
      total += acc / (static_cast<double>(na.height) * na.width);
    }
    return total;
  }

  static FeatureMap to_feature(const Image& img) {
    FeatureMap f;
    f.channels = 3;
    f.height = img.height;
    f.width = img.width;
    f.data.resize(static_cast<std::size_t>(3) * img.height * img.width);
    for (int c = 0; c < 3; ++c) {
      for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
          // map [0,1] to [-1,1]
          f.at(c, y, x) = 2.0 * img.at(y, x, c) - 1.0;
        }
      }
    }
    return f;
  }

  // Mean SSIM over all valid window positions and channels; uniform window,
  // standard stabilizing constants for unit dynamic range.
  double raw_ssim(const Image& a, const Image& b) const {
    const int win = std::min({backend_.ssim_window, a.height, a.width});
    const double c1 = 0.01 * 0.01;
    const double c2 = 0.03 * 0.03;
    const double n = static_cast<double>(win) * win;
    double total = 0.0;
    std::int64_t count = 0;
    for (int c = 0; c < 3; ++c) {
      for (int y = 0; y + win <= a.height; ++y) {
        for (int x = 0; x + win <= a.width; ++x) {
          double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
          for (int wy = 0; wy < win; ++wy) {
            for (int wx = 0; wx < win; ++wx) {
              const double va = a.at(y + wy, x + wx, c);
              const double vb = b.at(y + wy, x + wx, c);
              sa += va;
              sb += vb;
              saa += va * va;
              sbb += vb * vb;
              sab += va * vb;
            }
          }
          const double mu_a = sa / n;
          const double mu_b = sb / n;
          const double var_a = saa / n - mu_a * mu_a;
          const double var_b = sbb / n - mu_b * mu_b;
          const double cov = sab / n - mu_a * mu_b;
          const double ssim =
              ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
              ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
          total += ssim;
          ++count;
        }
      }
    }
    return total / static_cast<double>(count);
  }

  double raw_psnr(const Image& a, const Image& b) const {
    double mse = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
      const double d = a.data[i] - b.data[i];
      mse += d * d;
    }
    mse /= static_cast<double>(a.data.size());
    if (mse <= 0.0) return backend_.psnr_cap_db;
    return std::min(backend_.psnr_cap_db, 10.0 * std::log10(1.0 / mse));
  }

  SimilarityBackend backend_;
  std::vector<ConvLayer> layers_;
};

// Convenience form of the scoring operation for one-off calls.
inline double score(const Image& a, const Image& b,
                    const SimilarityBackend& backend) {
  return SimilarityScorer(backend).score(a, b);
}

struct RankingEntry {
  int class_id = 0;
  double score = 0.0;  // canonical orientation
};

// Per-class canonical scores arranged in descending order (Rank_v): the
// head of the list is the class with the fewest domain similarities.
struct ClassRanking {
  std::vector<RankingEntry> entries;
  std::vector<int> present_classes;
};

// Descending by score; ties break to the ascending class id so repeated
// calls agree bit-for-bit.
inline ClassRanking rank_from_scores(std::vector<RankingEntry> scores) {
  ClassRanking r;
  r.present_classes.reserve(scores.size());
  for (const auto& e : scores) r.present_classes.push_back(e.class_id);
  std::sort(r.present_classes.begin(), r.present_classes.end());
  std::sort(scores.begin(), scores.end(),
            [](const RankingEntry& a, const RankingEntry& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.class_id < b.class_id;
            });
  r.entries = std::move(scores);
  return r;
}

// Scores every class present in y_S against the night image and ranks them.
inline ClassRanking rank_classes(const Image& x_s, const LabelMap& y_s,
                                 const Image& x_t,
                                 const SimilarityScorer& scorer) {
  const std::vector<int> present = present_classes(y_s);
  require(!present.empty(), "rank_classes: empty source label");
  std::vector<RankingEntry> scores;
  scores.reserve(present.size());
  for (int c : present) {
    auto xc = extract_single_class(x_s, y_s, c);
    // present_classes guarantees the class occurs
    scores.push_back({c, scorer.score(*xc, x_t)});
  }
  return rank_from_scores(std::move(scores));
}

inline ClassRanking rank_classes(const Image& x_s, const LabelMap& y_s,
                                 const Image& x_t,
                                 const SimilarityBackend& backend) {
  return rank_classes(x_s, y_s, x_t, SimilarityScorer(backend));
}

struct AverageRankEntry {
  int class_id = 0;
  double mean_position = 0.0;  // 1-based rank positions
  int appearances = 0;
};

// Mean 1-based rank position per class over the rankings where it appears,
// ordered most-dissimilar first.
inline std::vector<AverageRankEntry> average_ranking(
    const std::vector<ClassRanking>& rankings) {
  require(!rankings.empty(), "average_ranking: empty ranking list");
  std::map<int, std::pair<double, int>> acc;  // class -> (position sum, count)
  for (const auto& r : rankings) {
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
      auto& slot = acc[r.entries[i].class_id];
      slot.first += static_cast<double>(i + 1);
      slot.second += 1;
    }
  }
  std::vector<AverageRankEntry> out;
  out.reserve(acc.size());
  for (const auto& [class_id, sum_count] : acc) {
    out.push_back({class_id, sum_count.first / sum_count.second,
                   sum_count.second});
  }
  std::sort(out.begin(), out.end(),
            [](const AverageRankEntry& a, const AverageRankEntry& b) {
              if (a.mean_position != b.mean_position)
                return a.mean_position < b.mean_position;
              return a.class_id < b.class_id;
            });
  return out;
}

}  // namespace pig
