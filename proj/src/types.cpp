#include "gazemark/types.hpp"

#include "gazemark/error.hpp"

namespace gazemark {

void ScreenGeometry::validate() const {
  if (width_px <= 0 || height_px <= 0 || width_cm <= 0.0 || height_cm <= 0.0 ||
      viewing_distance_cm <= 0.0) {
    throw Error(ErrorCode::BadValue, "screen geometry fields must be strictly positive");
  }
  // sanity bound on pixel pitch: 0.005..0.1 cm per pixel
  const double pitch = pitch_x_cm();
  if (pitch < 0.005 || pitch > 0.1) {
    throw Error(ErrorCode::BadValue,
                "pixel pitch " + std::to_string(pitch) + " cm/px outside [0.005, 0.1]");
  }
}

std::string to_string(Gender g) {
  switch (g) {
    case Gender::Female: return "female";
    case Gender::Male: return "male";
    case Gender::Other: return "other";
  }
  return "other";
}

std::string to_string(Label l) {
  return l == Label::Adhd ? "ADHD" : "NonADHD";
}

Gender gender_from_string(const std::string& s) {
  if (s == "female") return Gender::Female;
  if (s == "male") return Gender::Male;
  if (s == "other") return Gender::Other;
  throw Error(ErrorCode::BadValue, "unknown gender '" + s + "'");
}

Label label_from_string(const std::string& s) {
  if (s == "ADHD") return Label::Adhd;
  if (s == "NonADHD") return Label::NonAdhd;
  throw Error(ErrorCode::BadValue, "unknown label '" + s + "' (expected ADHD or NonADHD)");
}

}  // namespace gazemark
