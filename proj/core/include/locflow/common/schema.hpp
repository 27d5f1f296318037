#pragma once

#include <string_view>

namespace locflow::schema {

inline constexpr std::string_view kFlowRecord = "locflow.flow/1";
inline constexpr std::string_view kFeatureTable = "locflow.features/1";
inline constexpr std::string_view kTopicConfig = "locflow.topics/1";
inline constexpr std::string_view kAppContext = "locflow.context/1";
inline constexpr std::string_view kInstanceLabel = "locflow.instance-label/1";
inline constexpr std::string_view kFlowLabel = "locflow.flow-label/1";
inline constexpr std::string_view kContextModel = "locflow.context-model/1";
inline constexpr std::string_view kBundle = "locflow.bundle/1";
inline constexpr std::string_view kVerdict = "locflow.verdict/1";
inline constexpr std::string_view kReport = "locflow.report/1";
inline constexpr std::string_view kCdf = "locflow.cdf/1";
inline constexpr std::string_view kManifest = "locflow.manifest/1";

inline constexpr std::string_view kToolVersion = "0.3.0";

}  // namespace locflow::schema
