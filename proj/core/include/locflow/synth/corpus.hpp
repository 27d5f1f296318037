#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "locflow/capture/flow_io.hpp"
#include "locflow/capture/pcap.hpp"
#include "locflow/context/app_context.hpp"
#include "locflow/context/topic_config.hpp"
#include "locflow/pipeline/flow_labels.hpp"
#include "locflow/pipeline/instance_labels.hpp"

namespace locflow::synth {

/// Knobs for the synthetic capture corpus. Class-conditional traffic follows
/// three trends: non-location flows carry many more TCP packets, illegal
/// location flows have a larger maximum downlink packet, and legal location
/// flows have a longer mean inter-arrival time.
struct SynthConfig {
  std::uint64_t seed = 20170605;
  std::size_t apps = 120;
  std::size_t instances_per_app = 4;
  double labelled_fraction = 0.5;      // instances with a hand label for context training
  double ambiguous_fraction = 0.06;    // instances whose window contradicts the app
  double hostlist_coverage = 0.85;     // share of ad/analytics hosts listed
  double mislabel_fraction = 0.03;     // own-host location flows that are really illegal
  double coordinate_fraction = 0.75;   // location flows whose URL carries coordinates
};

struct SynthCorpus {
  std::vector<context::AppContext> contexts;
  std::vector<pipeline::InstanceLabel> true_intentions;   // every instance
  std::vector<pipeline::InstanceLabel> training_labels;   // labelled subset
  context::TopicConfig topics;
  std::string hostlist_text;
  std::set<std::string> device_ips;
  std::vector<capture::TcpFrameSpec> frames;              // time-ordered
  std::vector<capture::FlowAnnotation> annotations;
  std::vector<pipeline::FlowLabel> ground_truth;          // by flow id
};

SynthCorpus generate_corpus(const SynthConfig& config);

/// Topic configuration shared by the generator and the bundled data file.
context::TopicConfig default_topics();

/// File names written by write_corpus.
struct CorpusFiles {
  static constexpr const char* capture = "capture.pcap";
  static constexpr const char* annotations = "annotations.jsonl";
  static constexpr const char* contexts = "contexts.jsonl";
  static constexpr const char* training_labels = "instance_labels.jsonl";
  static constexpr const char* true_intentions = "true_intentions.jsonl";
  static constexpr const char* topics = "topics.json";
  static constexpr const char* hostlist = "hostlist.txt";
  static constexpr const char* ground_truth = "ground_truth.jsonl";
  static constexpr const char* device_ips = "device_ips.txt";
};

void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir);

}  // namespace locflow::synth
