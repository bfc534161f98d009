#include "hybridvar/observation.hpp"

namespace hybridvar {

const char* to_string(ObservationVariant variant) {
  switch (variant) {
    case ObservationVariant::RowsFirstP: return "H1_first_p";
    case ObservationVariant::EveryNthPoint: return "H2_every_nth";
    case ObservationVariant::FivePointAverage: return "H3_five_point";
    case ObservationVariant::RandomPlacement: return "H4_random";
  }
  return "unknown";
}

ObservationVariant observation_variant_from_int(int value) {
  require(value >= 1 && value <= 4, ErrorCode::InvalidArgument,
          "observation variant must be 1, 2, 3 or 4");
  return static_cast<ObservationVariant>(value);
}

}  // namespace hybridvar
