#ifndef DEPTEXT_TYPES_HPP
#define DEPTEXT_TYPES_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <string>
#include <vector>

namespace deptext {

// All training math runs in 64-bit floats.
using Scalar = double;
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
using SparseVector = Eigen::SparseVector<Scalar>;
using Index = Eigen::Index;

using TokenSeq = std::vector<std::string>;
using IndexSeq = std::vector<int>;

// Class indices used by every classifier. Depressed is the positive class.
inline constexpr int kNotDepressed = 0;
inline constexpr int kDepressed = 1;

}  // namespace deptext

#endif  // DEPTEXT_TYPES_HPP
