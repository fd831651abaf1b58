#include "scn/persistence.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "scn/error.hpp"

namespace scn {

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
  }
  out.write(bytes, sizeof(T));
}

template <typename T>
T get_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return static_cast<T>(v);
}

std::size_t row_bytes(std::uint32_t neurons) { return (std::size_t{neurons} + 7) / 8; }

}  // namespace

std::uint64_t payload_bytes(std::uint32_t clusters, std::uint32_t neurons) {
  return std::uint64_t{clusters} * (clusters - 1) * neurons * row_bytes(neurons);
}

void save_network(const LinkStore& store, std::ostream& out) {
  const auto& p = store.params();
  const auto c = p.clusters();
  const auto l = p.neurons();

  out.write(kNetworkMagic, 4);
  put_le<std::uint16_t>(out, kNetworkVersion);
  put_le<std::uint32_t>(out, c);
  put_le<std::uint32_t>(out, l);
  put_le<std::uint64_t>(out, store.stored_count());

  std::vector<char> row(row_bytes(l));
  for (std::uint32_t a = 0; a < c; ++a) {
    for (std::uint32_t b = 0; b < c; ++b) {
      if (a == b) continue;
      for (std::uint32_t r = 0; r < l; ++r) {
        const auto words = store.row(a, r, b).words();
        for (std::size_t j = 0; j < row.size(); ++j) {
          row[j] = static_cast<char>((words[j / 8] >> (8 * (j % 8))) & 0xFF);
        }
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
      }
    }
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing network");
}

void save_network(const LinkStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  save_network(store, out);
}

LinkStore load_network(std::istream& in) {
  unsigned char header[kNetworkHeaderSize];
  in.read(reinterpret_cast<char*>(header), kNetworkHeaderSize);
  if (in.gcount() < 4 || std::memcmp(header, kNetworkMagic, 4) != 0) {
    throw Error(ErrorCode::BadMagic, "not an SCNW network file");
  }
  if (static_cast<std::size_t>(in.gcount()) != kNetworkHeaderSize) {
    throw Error(ErrorCode::Truncated, "network header truncated");
  }
  NetworkFileHeader h;
  h.version = get_le<std::uint16_t>(header + 4);
  h.clusters = get_le<std::uint32_t>(header + 6);
  h.neurons = get_le<std::uint32_t>(header + 10);
  h.stored_count = get_le<std::uint64_t>(header + 14);
  if (h.version != kNetworkVersion) {
    throw Error(ErrorCode::BadVersion, "unsupported SCNW version " + std::to_string(h.version));
  }

  const NetworkParams params(h.clusters, h.neurons);
  // Reject oversized headers before allocating when the stream can report its length.
  const auto here = in.tellg();
  if (here != std::streampos(-1) && in.seekg(0, std::ios::end)) {
    const auto remaining = static_cast<std::uint64_t>(in.tellg() - here);
    in.seekg(here);
    if (remaining < payload_bytes(h.clusters, h.neurons)) {
      throw Error(ErrorCode::Truncated, "network payload truncated");
    }
  }
  in.clear();

  LinkStore store(params);
  LinkStoreWriter writer(store);
  writer.set_stored_count(h.stored_count);

  const auto l = h.neurons;
  const auto bytes_per_row = row_bytes(l);
  const unsigned pad_bits = static_cast<unsigned>(bytes_per_row * 8 - l);
  const auto pad_mask = static_cast<unsigned char>(pad_bits == 0 ? 0 : 0xFF << (8 - pad_bits));
  std::vector<unsigned char> row(bytes_per_row);
  for (std::uint32_t a = 0; a < h.clusters; ++a) {
    for (std::uint32_t b = 0; b < h.clusters; ++b) {
      if (a == b) continue;
      for (std::uint32_t r = 0; r < l; ++r) {
        in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
        if (static_cast<std::size_t>(in.gcount()) != row.size()) {
          throw Error(ErrorCode::Truncated, "network payload truncated");
        }
        if ((row.back() & pad_mask) != 0) {
          throw Error(ErrorCode::NonzeroPadding, "nonzero pad bits in network row");
        }
        for (std::uint32_t t = 0; t < l; ++t) {
          if ((row[t / 8] >> (t % 8)) & 1U) writer.set(a, r, b, t);
        }
      }
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::TrailingData, "unexpected bytes after network payload");
  }
  if (!store.symmetric()) {
    throw Error(ErrorCode::SymmetryViolation, "link blocks are not mutual transposes");
  }
  return store;
}

LinkStore load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return load_network(in);
}

bool is_skippable_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line.empty() || line.front() == '#';
}

namespace {

template <typename Entry, typename OnToken>
std::vector<Entry> split_line(std::string_view line, const NetworkParams& params,
                              OnToken on_token) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<Entry> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(' ', pos);
    const auto token = line.substr(pos, next == std::string_view::npos ? next : next - pos);
    if (token.empty()) {
      throw Error(ErrorCode::MalformedToken, "empty token in '" + std::string(line) + "'");
    }
    out.push_back(on_token(token));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (out.size() != params.clusters()) {
    throw Error(ErrorCode::WrongArity, "expected " + std::to_string(params.clusters()) +
                                           " symbols, got " + std::to_string(out.size()));
  }
  return out;
}

std::uint32_t parse_symbol(std::string_view token, const NetworkParams& params) {
  std::uint32_t value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec == std::errc::result_out_of_range) {
    throw Error(ErrorCode::SymbolOutOfRange, "symbol '" + std::string(token) + "' too large");
  }
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::MalformedToken, "malformed symbol '" + std::string(token) + "'");
  }
  if (value >= params.neurons()) {
    throw Error(ErrorCode::SymbolOutOfRange, "symbol " + std::to_string(value) +
                                                 " not below l=" +
                                                 std::to_string(params.neurons()));
  }
  return value;
}

}  // namespace

Message parse_message_line(std::string_view line, const NetworkParams& params) {
  return split_line<std::uint32_t>(line, params,
                                   [&](std::string_view t) { return parse_symbol(t, params); });
}

PartialMessage parse_query_line(std::string_view line, const NetworkParams& params) {
  return split_line<QueryEntry>(line, params, [&](std::string_view t) -> QueryEntry {
    if (t == "?") return ErasedCluster{};
    return Known{parse_symbol(t, params)};
  });
}

std::vector<Message> read_messages(std::istream& in, const NetworkParams& params) {
  std::vector<Message> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (is_skippable_line(line)) continue;
    try {
      out.push_back(parse_message_line(line, params));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Message> read_messages(const std::string& path, const NetworkParams& params) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return read_messages(in, params);
}

std::string format_message(const Message& msg) {
  std::string out;
  for (std::size_t i = 0; i < msg.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(msg[i]);
  }
  return out;
}

}  // namespace scn
