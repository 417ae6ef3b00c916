#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace t2vbench {

enum class errc {
  schema,
  duplicate_id,
  io,
  unknown_direction,
  dimension_mismatch,
  precondition,
  adapter_unavailable,
  missing_fixture,
  protocol,
  empty_mask,
  empty_input,
  no_foreground_points,
  no_background_points,
  missing_placeholder,
  unparseable_response,
  out_of_range,
  degenerate_input,
  insufficient_overlap,
  empty_category,
};

constexpr std::string_view errc_name(errc code) noexcept {
  switch (code) {
    case errc::schema: return "SchemaError";
    case errc::duplicate_id: return "DuplicateId";
    case errc::io: return "IoError";
    case errc::unknown_direction: return "UnknownDirection";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::precondition: return "PreconditionError";
    case errc::adapter_unavailable: return "AdapterUnavailable";
    case errc::missing_fixture: return "MissingFixture";
    case errc::protocol: return "ProtocolError";
    case errc::empty_mask: return "EmptyMask";
    case errc::empty_input: return "EmptyInput";
    case errc::no_foreground_points: return "NoForegroundPoints";
    case errc::no_background_points: return "NoBackgroundPoints";
    case errc::missing_placeholder: return "MissingPlaceholder";
    case errc::unparseable_response: return "UnparseableResponse";
    case errc::out_of_range: return "OutOfRange";
    case errc::degenerate_input: return "DegenerateInput";
    case errc::insufficient_overlap: return "InsufficientOverlap";
    case errc::empty_category: return "EmptyCategory";
  }
  return "Error";
}

/// Base of every engine error. `code()` identifies the failure class so callers
/// that catch `error&` can still branch (the CLI maps codes to exit statuses).
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

template <errc Code>
class coded_error : public error {
 public:
  explicit coded_error(const std::string& what) : error(Code, what) {}
};

using schema_error = coded_error<errc::schema>;
using duplicate_id_error = coded_error<errc::duplicate_id>;
using io_error = coded_error<errc::io>;
using unknown_direction_error = coded_error<errc::unknown_direction>;
using dimension_mismatch_error = coded_error<errc::dimension_mismatch>;
using precondition_error = coded_error<errc::precondition>;
using adapter_unavailable_error = coded_error<errc::adapter_unavailable>;
using missing_fixture_error = coded_error<errc::missing_fixture>;
using protocol_error = coded_error<errc::protocol>;
using empty_mask_error = coded_error<errc::empty_mask>;
using empty_input_error = coded_error<errc::empty_input>;
using no_foreground_points_error = coded_error<errc::no_foreground_points>;
using no_background_points_error = coded_error<errc::no_background_points>;
using missing_placeholder_error = coded_error<errc::missing_placeholder>;
using unparseable_response_error = coded_error<errc::unparseable_response>;
using out_of_range_error = coded_error<errc::out_of_range>;
using degenerate_input_error = coded_error<errc::degenerate_input>;
using insufficient_overlap_error = coded_error<errc::insufficient_overlap>;
using empty_category_error = coded_error<errc::empty_category>;

}  // namespace t2vbench
