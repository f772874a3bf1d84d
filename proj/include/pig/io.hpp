#pragma once

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

#include "pig/image.hpp"

namespace pig {

// 8-bit RGB PNG -> [0,1] reals. Decoding is the only place the project
// touches an image codec; everything downstream works on Image/LabelMap.
inline Image load_image(const std::string& path) {
  cv::Mat mat = cv::imread(path, cv::IMREAD_COLOR);
  require(!mat.empty(), "load_image: cannot read '", path, "'");
  Image img = Image::zeros(mat.rows, mat.cols);
  for (int y = 0; y < mat.rows; ++y) {
    const auto* row = mat.ptr<cv::Vec3b>(y);
    for (int x = 0; x < mat.cols; ++x) {
      // OpenCV loads BGR
      img.at(y, x, 0) = row[x][2] / 255.0;
      img.at(y, x, 1) = row[x][1] / 255.0;
      img.at(y, x, 2) = row[x][0] / 255.0;
    }
  }
  return img;
}

inline void save_image(const std::string& path, const Image& img) {
  cv::Mat mat(img.height, img.width, CV_8UC3);
  for (int y = 0; y < img.height; ++y) {
    auto* row = mat.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        const double v = std::clamp(img.at(y, x, c), 0.0, 1.0);
        row[x][2 - c] = static_cast<std::uint8_t>(std::lround(v * 255.0));
      }
    }
  }
  std::filesystem::create_directories(
      std::filesystem::path(path).parent_path());
  require(cv::imwrite(path, mat), "save_image: cannot write '", path, "'");
}

// Single-channel 8-bit raster of raw class ids, kIgnoreLabel = 255.
inline LabelMap load_label(const std::string& path) {
  cv::Mat mat = cv::imread(path, cv::IMREAD_GRAYSCALE);
  require(!mat.empty(), "load_label: cannot read '", path, "'");
  LabelMap lm = LabelMap::filled(mat.rows, mat.cols, 0);
  for (int y = 0; y < mat.rows; ++y) {
    const auto* row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < mat.cols; ++x) {
      lm.at(y, x) = row[x];
    }
  }
  return lm;
}

inline void save_label(const std::string& path, const LabelMap& lm) {
  cv::Mat mat(lm.height, lm.width, CV_8UC1);
  for (int y = 0; y < lm.height; ++y) {
    auto* row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < lm.width; ++x) {
      row[x] = lm.at(y, x);
    }
  }
  std::filesystem::create_directories(
      std::filesystem::path(path).parent_path());
  require(cv::imwrite(path, mat), "save_label: cannot write '", path, "'");
}

}  // namespace pig
