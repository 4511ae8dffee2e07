#pragma once

#include <string_view>

#include "mapreel/camera.hpp"

namespace mapreel {

enum class GapFillMode { FlyTo, Linear };

std::string_view toString(GapFillMode mode);
GapFillMode parseGapFillMode(std::string_view text);

// Time-parameterized camera curve between two states.
class Trajectory {
public:
    // Optimal zoom-and-pan path (rho = sqrt 2) in projected space.
    // `referenceWidthPx` is the screen width the visible-extent term is
    // measured against.
    static Trajectory flyTo(const CameraState& from, const CameraState& to, double duration,
                            double referenceWidthPx = kTileSize);
    static Trajectory linear(const CameraState& from, const CameraState& to, double duration);
    static Trajectory hold(const CameraState& state, double duration);

    CameraState at(double seconds) const;

    double duration() const { return duration_; }
    const CameraState& from() const { return from_; }
    const CameraState& to() const { return to_; }
    bool usesOptimalPath() const { return optimal_; }

    // Path length S in the van Wijk parameter.
    double pathLength() const { return pathLength_; }

private:
    Trajectory(const CameraState& from, const CameraState& to, double duration);

    CameraState from_;
    CameraState to_;
    double duration_ = 0.0;
    bool optimal_ = false;

    MercatorPoint c0_;
    MercatorPoint c1_;
    double u1_ = 0.0;
    double w0_ = 0.0;
    double r0_ = 0.0;
    double pathLength_ = 0.0;
    double referenceWidthPx_ = kTileSize;
};

}  // namespace mapreel
