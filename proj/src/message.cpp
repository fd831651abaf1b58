#include "scn/message.hpp"

#include <bit>
#include <string>

#include "scn/error.hpp"

namespace scn {

namespace {

void check_arity(const NetworkParams& params, std::size_t size) {
  if (size != params.clusters()) {
    throw Error(ErrorCode::WrongArity, "expected " + std::to_string(params.clusters()) +
                                           " sub-messages, got " + std::to_string(size));
  }
}

void check_symbol(const NetworkParams& params, std::uint32_t symbol) {
  if (symbol >= params.neurons()) {
    throw Error(ErrorCode::SymbolOutOfRange, "symbol " + std::to_string(symbol) +
                                                 " not below l=" +
                                                 std::to_string(params.neurons()));
  }
}

}  // namespace

void validate_message(const NetworkParams& params, const Message& msg) {
  check_arity(params, msg.size());
  for (auto s : msg) check_symbol(params, s);
}

void validate_query(const NetworkParams& params, const PartialMessage& query) {
  check_arity(params, query.size());
  const std::uint32_t kappa_mask =
      params.kappa() >= 32 ? ~0U : (1U << params.kappa()) - 1;
  for (const auto& entry : query) {
    if (const auto* known = std::get_if<Known>(&entry)) {
      check_symbol(params, known->symbol);
    } else if (const auto* bits = std::get_if<PartialBits>(&entry)) {
      if ((bits->erased_mask & ~kappa_mask) != 0 || (bits->value & ~kappa_mask) != 0) {
        throw Error(ErrorCode::InvalidParams, "partial sub-message wider than kappa bits");
      }
      // Smallest admissible neuron: known bits as given, erased bits zero.
      if ((bits->value & ~bits->erased_mask) >= params.neurons()) {
        throw Error(ErrorCode::FailedInput,
                    "partial sub-message matches no neuron below l=" +
                        std::to_string(params.neurons()));
      }
    }
  }
}

PartialMessage as_query(const Message& msg) {
  PartialMessage q;
  q.reserve(msg.size());
  for (auto s : msg) q.emplace_back(Known{s});
  return q;
}

std::uint32_t erased_bits(const NetworkParams& params, const QueryEntry& entry) {
  if (std::holds_alternative<ErasedCluster>(entry)) return params.kappa();
  if (const auto* bits = std::get_if<PartialBits>(&entry)) {
    return static_cast<std::uint32_t>(std::popcount(bits->erased_mask));
  }
  return 0;
}

}  // namespace scn
