#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace commute {

// Transport modes in their fixed canonical order. Ties in modal/argmax picks
// are always broken toward the lower index.
enum class Mode : uint8_t { Motorcycle = 0, Car = 1, Transit = 2 };

inline constexpr int kNumModes = 3;
inline constexpr std::array<Mode, kNumModes> kAllModes{Mode::Motorcycle, Mode::Car,
                                                       Mode::Transit};

constexpr int mode_index(Mode m) { return static_cast<int>(m); }

constexpr std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Motorcycle: return "motorcycle";
    case Mode::Car: return "car";
    case Mode::Transit: return "transit";
  }
  return "?";
}

inline std::optional<Mode> mode_from_name(std::string_view name) {
  for (Mode m : kAllModes) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

// Transport attributes entering the weighted satisfaction sum.
enum class Attribute : uint8_t {
  AcquisitionCost = 0,
  OperatingCost,
  RoadSafety,
  PersonalSecurity,
  Comfort,
  CommuteTime,
  Pollution,
};

inline constexpr int kNumAttributes = 7;

constexpr int attribute_index(Attribute a) { return static_cast<int>(a); }

constexpr std::string_view attribute_name(Attribute a) {
  switch (a) {
    case Attribute::AcquisitionCost: return "acquisition_cost";
    case Attribute::OperatingCost: return "operating_cost";
    case Attribute::RoadSafety: return "road_safety";
    case Attribute::PersonalSecurity: return "personal_security";
    case Attribute::Comfort: return "comfort";
    case Attribute::CommuteTime: return "commute_time";
    case Attribute::Pollution: return "pollution";
  }
  return "?";
}

inline constexpr std::array<Attribute, kNumAttributes> kAllAttributes{
    Attribute::AcquisitionCost, Attribute::OperatingCost,  Attribute::RoadSafety,
    Attribute::PersonalSecurity, Attribute::Comfort,       Attribute::CommuteTime,
    Attribute::Pollution};

// Socioeconomic levels are 1..3; arrays are indexed level-1.
inline constexpr int kNumIncomeLevels = 3;

template <typename T>
using PerMode = std::array<T, kNumModes>;

template <typename T>
using PerAttribute = std::array<T, kNumAttributes>;

template <typename T>
using PerIncomeLevel = std::array<T, kNumIncomeLevels>;

}  // namespace commute
