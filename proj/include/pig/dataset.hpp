#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "pig/image.hpp"
#include "pig/io.hpp"

namespace pig {

enum class DomainTag { SOURCE_DAY, TARGET_NIGHT, PROMPT_NIGHT };

inline const char* domain_tag_name(DomainTag tag) {
  switch (tag) {
    case DomainTag::SOURCE_DAY: return "SOURCE_DAY";
    case DomainTag::TARGET_NIGHT: return "TARGET_NIGHT";
    case DomainTag::PROMPT_NIGHT: return "PROMPT_NIGHT";
  }
  return "?";
}

inline DomainTag parse_domain_tag(const std::string& s) {
  if (s == "SOURCE_DAY") return DomainTag::SOURCE_DAY;
  if (s == "TARGET_NIGHT") return DomainTag::TARGET_NIGHT;
  if (s == "PROMPT_NIGHT") return DomainTag::PROMPT_NIGHT;
  fail("unknown domain tag '", s, "'");
}

inline bool domain_is_labeled(DomainTag tag) {
  return tag != DomainTag::TARGET_NIGHT;
}

struct DomainSample {
  Image image;
  std::optional<LabelMap> label;
  DomainTag domain_tag = DomainTag::SOURCE_DAY;
};

struct ManifestEntry {
  std::string image_path;
  std::string label_path;  // empty for unlabeled domains
};

// Enumerates the image/label pairs of one domain directory. Immutable after
// construction; sample loading is stateless.
struct DatasetManifest {
  std::string root;
  DomainTag domain = DomainTag::SOURCE_DAY;
  int num_classes = 0;
  std::vector<std::string> class_names;
  std::vector<ManifestEntry> entries;

  std::size_t size() const { return entries.size(); }

  DomainSample load_sample(std::size_t i) const {
    require(i < entries.size(), "load_sample: index ", i, " out of range");
    DomainSample s;
    s.domain_tag = domain;
    s.image = load_image(entries[i].image_path);
    if (!entries[i].label_path.empty()) {
      LabelMap lm = load_label(entries[i].label_path);
      validate_label(lm, num_classes, entries[i].label_path.c_str());
      require(lm.height == s.image.height && lm.width == s.image.width,
              "load_sample: image/label extent mismatch for '",
              entries[i].image_path, "'");
      s.label = std::move(lm);
    }
    return s;
  }

  void save(const std::string& path) const {
    std::filesystem::create_directories(
        std::filesystem::path(path).parent_path());
    std::ofstream out(path);
    require(out.good(), "manifest save: cannot open '", path, "'");
    out << "domain " << domain_tag_name(domain) << "\n";
    out << "num_classes " << num_classes << "\n";
    out << "root " << root << "\n";
    for (const auto& e : entries) {
      out << e.image_path << "\t" << e.label_path << "\n";
    }
  }

  static DatasetManifest load(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "manifest load: cannot open '", path, "'");
    DatasetManifest m;
    std::string line;
    int header = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (header < 3) {
        std::istringstream iss(line);
        std::string key, value;
        iss >> key >> value;
        if (key == "domain") m.domain = parse_domain_tag(value);
        else if (key == "num_classes") m.num_classes = std::stoi(value);
        else if (key == "root") m.root = value;
        else fail("manifest load: unexpected header line '", line, "'");
        ++header;
        continue;
      }
      const auto tab = line.find('\t');
      require(tab != std::string::npos, "manifest load: malformed entry '",
              line, "'");
      m.entries.push_back({line.substr(0, tab), line.substr(tab + 1)});
    }
    return m;
  }
};

// Default NFNet prompt budget: "no more than 10 images".
inline constexpr std::size_t kDefaultMaxPromptImages = 10;

// Scans <root>/images/*.png and, for labeled domains, <root>/labels/ with
// matching basenames. Every label raster is validated against num_classes
// up front so invalid class ids surface at ingestion, not mid-training.
inline DatasetManifest load_dataset(
    const std::string& root, DomainTag domain, int num_classes,
    std::size_t max_prompt_images = kDefaultMaxPromptImages) {
  namespace fs = std::filesystem;
  require(num_classes >= 2 && num_classes <= 255,
          "load_dataset: num_classes must be in [2,255], got ", num_classes);
  const fs::path images_dir = fs::path(root) / "images";
  require(fs::is_directory(images_dir), "load_dataset: missing directory '",
          images_dir.string(), "'");

  DatasetManifest m;
  m.root = root;
  m.domain = domain;
  m.num_classes = num_classes;

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(images_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  require(!files.empty(), "load_dataset: no .png images under '",
          images_dir.string(), "'");

  const bool labeled = domain_is_labeled(domain);
  const fs::path labels_dir = fs::path(root) / "labels";
  for (const auto& img_path : files) {
    ManifestEntry e;
    e.image_path = img_path.string();
    if (labeled) {
      const fs::path label_path = labels_dir / img_path.filename();
      require(fs::is_regular_file(label_path),
              "load_dataset: missing label for labeled domain: '",
              label_path.string(), "'");
      e.label_path = label_path.string();
      LabelMap lm = load_label(e.label_path);
      validate_label(lm, num_classes, e.label_path.c_str());
    }
    m.entries.push_back(std::move(e));
  }

  if (domain == DomainTag::PROMPT_NIGHT && max_prompt_images > 0) {
    require(m.entries.size() <= max_prompt_images,
            "load_dataset: prompt set has ", m.entries.size(),
            " images, exceeding the limit of ", max_prompt_images,
            " (raise data.max_prompt_images to override)");
  }
  return m;
}

// Counts per class id plus the separate ignore count; class counts and the
// ignore count sum to H*W.
struct ClassHistogram {
  std::vector<std::int64_t> counts;
  std::int64_t ignore_count = 0;
};

inline ClassHistogram class_histogram(const LabelMap& label, int num_classes) {
  validate_label(label, num_classes);
  ClassHistogram h;
  h.counts.assign(num_classes, 0);
  for (std::uint8_t v : label.data) {
    if (v == kIgnoreLabel) {
      ++h.ignore_count;
    } else {
      ++h.counts[v];
    }
  }
  return h;
}

// Sorted list of non-ignore class ids present in a label map.
inline std::vector<int> present_classes(const LabelMap& label) {
  std::vector<bool> seen(256, false);
  for (std::uint8_t v : label.data) seen[v] = true;
  std::vector<int> out;
  for (int c = 0; c < 255; ++c) {
    if (seen[c]) out.push_back(c);
  }
  return out;
}

}  // namespace pig
