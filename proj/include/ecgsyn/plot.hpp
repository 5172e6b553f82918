#pragma once

#include <string>

#include "ecgsyn/dataset.hpp"
#include "ecgsyn/evaluation.hpp"

namespace ecgsyn {

/// Writes a single beat as a polyline SVG (fixed viewBox, amplitude
/// auto-scaled) with an optional annotation string rendered as text.
void write_beat_svg(const Beat& beat, const std::string& path,
                    const std::string& annotation = "");

/// One CSV row per sample: index,value.
void write_beat_csv(const Beat& beat, const std::string& path);

/// Epoch curves: one polyline per series over the epoch axis.
void write_epoch_curve_svg(const EpochCurve& curve, const std::string& path);
void write_epoch_curve_csv(const EpochCurve& curve, const std::string& path);

} // namespace ecgsyn
