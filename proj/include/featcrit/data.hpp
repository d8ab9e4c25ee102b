// SPDX-License-Identifier: Apache-2.0
//
// Multi-domain datasets. Images are stored one per row (HWC, values in
// [0, 1]); labels are indices into the domain's label space, whose entries
// are the original class ids.
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "featcrit/autodiff.hpp"

namespace featcrit {

enum class SplitTag : std::uint8_t { Train, Test };

struct Domain {
  int id = 0;
  std::string name;
  int height = 0;
  int width = 0;
  int channels = 1;
  /// label_space[k] is the original class id behind head label k.
  std::vector<int> label_space;
  Matrix images;
  std::vector<int> labels;
  std::vector<SplitTag> tags;

  std::size_t size() const { return labels.size(); }
  int num_classes() const { return static_cast<int>(label_space.size()); }

  /// Rows in the given order; tags and label space carried over.
  Domain subset(const std::vector<std::size_t>& rows) const;
  Domain split(SplitTag tag) const;
  /// Throws on inconsistent sizes, labels outside the label space or
  /// non-finite/out-of-range pixels.
  void validate() const;
};

/// Source domains plus the held-out target. In homogeneous mode all label
/// spaces match; in heterogeneous mode the target's is disjoint from every
/// source's.
struct DomainSet {
  std::vector<Domain> sources;
  Domain target;
  bool heterogeneous = false;

  void validate() const;
};

struct IdxData {
  int rows = 0;
  int cols = 0;
  Matrix images;
  std::vector<int> labels;
};

/// Parses an IDX3 image file (magic 0x00000803) and IDX1 label file
/// (magic 0x00000801). Pixels are scaled to [0, 1].
IdxData load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path);
void write_idx_images(const std::filesystem::path& path, const std::vector<std::uint8_t>& pixels,
                      std::uint32_t count, std::uint32_t rows, std::uint32_t cols);
void write_idx_labels(const std::filesystem::path& path, const std::vector<std::uint8_t>& labels);

/// Clockwise rotation about the image centre with bilinear resampling and zero
/// fill. Each row of `images` is one h x w single-channel image.
Matrix rotate_images(const Matrix& images, int height, int width, double degrees);

/// Samples `per_class` images of each class from `base` to form M0, then one
/// domain per angle by rotating M0 clockwise. Within each class the first
/// round(per_class * train_fraction) samples are tagged Train, the rest Test.
std::vector<Domain> make_rotated_domains(const IdxData& base, int per_class,
                                         const std::vector<double>& angles, std::mt19937_64& rng,
                                         double train_fraction = 0.5);

/// Homogeneous leave-one-domain-out: `target` held out, the rest as sources.
DomainSet leave_one_out(const std::vector<Domain>& domains, std::size_t target);

/// Restricts every source to `source_classes` and the target to
/// `target_classes`, relabelling heads to positions in those lists.
DomainSet heterogeneous_split(const std::vector<Domain>& sources, const Domain& target,
                              const std::vector<int>& source_classes,
                              const std::vector<int>& target_classes);

struct Batch {
  Matrix images;
  std::shared_ptr<const std::vector<int>> labels;
};

Batch gather(const Domain& domain, const std::vector<std::size_t>& rows);

/// Uniform sampling without replacement within an epoch. When the remaining
/// indices of the current epoch cannot fill a batch, a fresh permutation
/// starts.
class BatchSampler {
 public:
  explicit BatchSampler(std::size_t domain_size) : size_(domain_size) {}

  std::vector<std::size_t> next(std::size_t batch_size, std::mt19937_64& rng);

 private:
  std::size_t size_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
};

Batch sample_minibatch(const Domain& domain, BatchSampler& sampler, std::size_t batch_size,
                       std::mt19937_64& rng);

struct SynthConfig {
  int n_domains = 6;
  int per_class = 100;
  int n_classes = 10;
  /// Clockwise rotation between consecutive domains, degrees.
  double shift_degrees = 15.0;
  int size = 16;
  double train_fraction = 0.5;
  /// Per-sample blob position jitter (pixels, sd) and additive pixel noise (sd).
  double jitter = 0.5;
  double noise = 0.05;
};

/// Procedural class-conditional images made of anisotropic Gaussian blobs.
/// Domain d rotates every blob (position and orientation) by d * shift.
std::vector<Domain> synth_domains(const SynthConfig& config, std::mt19937_64& rng);

}  // namespace featcrit
