#pragma once

// Eigen views over TT core storage. Internal to the library.

#include <Eigen/Dense>

#include "fttc/tensor_train.hpp"

namespace fttc::linalg {

using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<Mat>;
using ConstMapMat = Eigen::Map<const Mat>;

/// (left*mode) x right view.
inline ConstMapMat left_unfolding(const TtCore& c) {
  return {c.data().data(), static_cast<Eigen::Index>(c.left() * c.mode()),
          static_cast<Eigen::Index>(c.right())};
}
inline MapMat left_unfolding(TtCore& c) {
  return {c.data().data(), static_cast<Eigen::Index>(c.left() * c.mode()),
          static_cast<Eigen::Index>(c.right())};
}

/// left x (mode*right) view.
inline ConstMapMat right_unfolding(const TtCore& c) {
  return {c.data().data(), static_cast<Eigen::Index>(c.left()),
          static_cast<Eigen::Index>(c.mode() * c.right())};
}
inline MapMat right_unfolding(TtCore& c) {
  return {c.data().data(), static_cast<Eigen::Index>(c.left()),
          static_cast<Eigen::Index>(c.mode() * c.right())};
}

/// Slice W[:, k, :] as a strided left x right matrix.
inline Eigen::Map<const Mat, 0, Eigen::OuterStride<>> slice(const TtCore& c,
                                                           std::size_t k) {
  return {c.data().data() + k * c.right(), static_cast<Eigen::Index>(c.left()),
          static_cast<Eigen::Index>(c.right()),
          Eigen::OuterStride<>(static_cast<Eigen::Index>(c.mode() * c.right()))};
}

inline TtCore core_from_left_unfolding(const Mat& m, std::size_t left,
                                       std::size_t mode) {
  TtCore c(left, mode, static_cast<std::size_t>(m.cols()));
  left_unfolding(c) = m;
  return c;
}

inline TtCore core_from_right_unfolding(const Mat& m, std::size_t mode,
                                        std::size_t right) {
  TtCore c(static_cast<std::size_t>(m.rows()), mode, right);
  right_unfolding(c) = m;
  return c;
}

}  // namespace fttc::linalg
