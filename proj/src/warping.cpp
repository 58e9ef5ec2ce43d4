#include "articugeo/warping.hpp"

namespace articugeo {

PixelMask combine_masks(const std::vector<PixelMask>& masks) {
  require(!masks.empty(), ErrorCode::kInvalidArgument, "combine_masks: empty list");
  PixelMask out = masks.front();
  for (std::size_t k = 1; k < masks.size(); ++k) {
    require_same_shape(out, masks[k], "combine_masks");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (out[i] && masks[k][i]) ? 1 : 0;
  }
  return out;
}

}  // namespace articugeo
