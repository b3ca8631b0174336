#ifndef BANDITSUM_CONFIG_HPP
#define BANDITSUM_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "banditsum/model.hpp"
#include "banditsum/trainer.hpp"

namespace banditsum::config {

/// Which network to build and how large.
struct ModelSpec {
  std::string kind = "bag_of_words";
  /// Vocabulary cap including <unk>; 0 keeps every training token.
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 100;
  std::size_t hidden_dim = 100;
  std::size_t word_hidden = 200;
  std::size_t sent_hidden = 200;
  std::size_t sent_layers = 2;
  std::size_t mlp_hidden = 100;
  /// Optional pretrained embedding text file.
  std::string embeddings;

  /// Builds the network with a vocabulary drawn from `corpus`.
  std::unique_ptr<model::AffinityModel> build(const text::Corpus& corpus, std::uint64_t seed) const;
  std::unique_ptr<model::AffinityModel> build(model::Vocabulary vocab, std::uint64_t seed) const;
};

struct RunConfig {
  trainer::TrainConfig train;
  ModelSpec model;
};

/// Parses flat `key = value` lines. '#' starts a comment; blank lines are
/// ignored. Recognized keys:
///
///   B M epsilon affinity_floor baseline epochs seed validation_interval
///   validation_limit stem union_lcs
///   lr beta1 beta2 eps_stab weight_decay clip_norm
///   model vocab_size embed_dim hidden_dim word_hidden sent_hidden
///   sent_layers mlp_hidden embeddings
///
/// Unknown keys, duplicate keys and unparsable values throw
/// std::runtime_error naming the line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Renders every key in parse_config's format.
std::string render_config(const RunConfig& config);

}  // namespace banditsum::config

#endif  // BANDITSUM_CONFIG_HPP
