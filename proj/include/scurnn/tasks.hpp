#pragma once
#include <optional>
#include <string>
#include <vector>

#include "scurnn/linalg.hpp"

namespace scurnn {

// Copying problem. Rows are batch elements, columns are the T+20 positions.
// Inputs use the alphabet {0..9} (9 is the marker); targets use {0..8}.
struct CopyingBatch {
  int T = 0;
  Eigen::MatrixXi inputs;   // B x (T+20)
  Eigen::MatrixXi targets;  // B x (T+20)
};

CopyingBatch gen_copying(int T, int batch, std::uint64_t seed);

// Expected cross entropy of the memoryless baseline: 10 ln(8) / (T+20).
double copying_baseline(int T);

// Adding problem: values ~ U[0,1), two marker ones per row (one per half),
// target is the marked sum.
struct AddingBatch {
  RMat values;   // B x T
  RMat markers;  // B x T
  RVec targets;  // B
};

AddingBatch gen_adding(int T, int batch, std::uint64_t seed);

struct MnistDataset {
  RMat pixels;             // N x 784, scaled to [0,1]
  Eigen::VectorXi labels;  // N
};

// Reads IDX image/label files (optionally gzip-compressed). When
// permutation_seed is set, one fixed pixel permutation drawn from the seed
// is applied to every sequence.
MnistDataset load_mnist(const std::string& images_path,
                        const std::string& labels_path,
                        std::optional<std::uint64_t> permutation_seed = {});

// ---- model-input encoders (tau entries of m x B) ----

// One-hot over 10 symbols; rows lo..hi-1 of the batch.
std::vector<RMat> copying_inputs(const CopyingBatch& batch, int lo, int hi);
// Labels as (T+20) x B class indices.
Eigen::MatrixXi copying_labels(const CopyingBatch& batch, int lo, int hi);

// Two channels: value, marker.
std::vector<RMat> adding_inputs(const AddingBatch& batch, int lo, int hi);
// targets/mask shaped like the model output sequence (1 x B per step,
// masked to the final step only).
void adding_targets(const AddingBatch& batch, int lo, int hi, int T,
                    std::vector<RMat>& targets, std::vector<RMat>& mask);

// Pixel-by-pixel sequences (m = 1) for the listed dataset rows.
std::vector<RMat> mnist_inputs(const MnistDataset& data,
                               const std::vector<int>& rows);
Eigen::MatrixXi mnist_labels(const MnistDataset& data,
                             const std::vector<int>& rows);

}  // namespace scurnn
