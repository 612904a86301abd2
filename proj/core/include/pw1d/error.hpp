#ifndef PW1D_ERROR_HPP
#define PW1D_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pw1d {

enum class Errc {
  zero_vector,
  degenerate_triple,
  mixed_surd_base,
  singular_matrix,
  pole_at_point,
  not_circularly_ordered,
  not_injective,
  not_surjective,
  non_affine_piece_in_circ_model,
  model_mismatch,
  not_supported_on_complement,
  unknown_generator,
  radius_zero_with_empty_seeds,
  ball_too_small,
  not_closed,
  too_large,
  not_a_group,
  mixed_model,
  not_a_circle,
  not_hausdorff,
  target_not_representable,
  parse_error,
  bad_input,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace pw1d

#endif
