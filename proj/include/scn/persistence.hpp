#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "scn/link_store.hpp"
#include "scn/message.hpp"

namespace scn {

// SCNW network file, all integers little-endian:
//
//   offset  size  field
//   0       4     magic "SCNW"
//   4       2     version (1)
//   6       4     c
//   10      4     l
//   14      8     stored_count
//   22      ...   payload
//
// The payload holds every block (a, b), a != b, in lexicographic order. A
// block is l rows of ceil(l/8) bytes; bit k of byte j in row r is the link
// from neuron r of cluster a to neuron 8j+k of cluster b. Pad bits are zero.

inline constexpr char kNetworkMagic[4] = {'S', 'C', 'N', 'W'};
inline constexpr std::uint16_t kNetworkVersion = 1;
inline constexpr std::size_t kNetworkHeaderSize = 22;

struct NetworkFileHeader {
  std::uint16_t version = kNetworkVersion;
  std::uint32_t clusters = 0;
  std::uint32_t neurons = 0;
  std::uint64_t stored_count = 0;
};

std::uint64_t payload_bytes(std::uint32_t clusters, std::uint32_t neurons);

void save_network(const LinkStore& store, std::ostream& out);
void save_network(const LinkStore& store, const std::string& path);

/// Validates magic, version, size, zero padding and block symmetry.
LinkStore load_network(std::istream& in);
LinkStore load_network(const std::string& path);

/// True for blank lines and lines whose first character is '#'.
bool is_skippable_line(std::string_view line);

/// "1 2 3": c decimal symbols separated by single spaces.
Message parse_message_line(std::string_view line, const NetworkParams& params);
/// Same as messages, with "?" for an erased cluster.
PartialMessage parse_query_line(std::string_view line, const NetworkParams& params);

std::vector<Message> read_messages(std::istream& in, const NetworkParams& params);
std::vector<Message> read_messages(const std::string& path, const NetworkParams& params);

std::string format_message(const Message& msg);

}  // namespace scn
