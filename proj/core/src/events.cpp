#include "ionlink/events.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "ionlink/errors.hpp"

namespace ionlink::io {

namespace {

photons::EventRecord parse_line(const std::string& line, std::size_t line_number) {
  const auto comma = line.find(',');
  if (comma == std::string::npos) {
    throw parse_error("event record missing ',' separator", line_number);
  }
  int channel = -1;
  {
    const char* first = line.data();
    const char* last = line.data() + comma;
    const auto [ptr, ec] = std::from_chars(first, last, channel);
    if (ec != std::errc{} || ptr != last) {
      throw parse_error("event record has a malformed channel field", line_number);
    }
  }
  if (channel != 0 && channel != 1) {
    throw parse_error("event channel out of range (must be 0 or 1)", line_number);
  }
  std::uint64_t ticks = 0;
  {
    const char* first = line.data() + comma + 1;
    const char* last = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(first, last, ticks);
    if (ec != std::errc{} || ptr != last || first == last) {
      throw parse_error("event record has a malformed timestamp field", line_number);
    }
  }
  return {ticks, static_cast<std::uint8_t>(channel)};
}

}  // namespace

std::vector<photons::EventRecord> parse_event_stream(std::istream& in, bool binary) {
  std::vector<photons::EventRecord> records;
  if (binary) {
    std::array<char, 9> buf;
    std::size_t index = 0;
    while (in.read(buf.data(), static_cast<std::streamsize>(buf.size()))) {
      ++index;
      const auto channel = static_cast<std::uint8_t>(buf[0]);
      if (channel > 1) {
        throw parse_error("event channel out of range (must be 0 or 1)", index);
      }
      std::uint64_t ticks = 0;
      for (int b = 7; b >= 0; --b) {
        ticks = (ticks << 8) | static_cast<std::uint8_t>(buf[static_cast<std::size_t>(1 + b)]);
      }
      records.push_back({ticks, channel});
    }
    if (in.gcount() != 0) {
      throw parse_error("truncated binary event record", index + 1);
    }
  } else {
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      records.push_back(parse_line(line, line_number));
    }
  }
  std::sort(records.begin(), records.end());
  return records;
}

void write_event_stream(std::ostream& out, std::vector<photons::EventRecord> events,
                        bool binary) {
  std::sort(events.begin(), events.end());
  if (binary) {
    for (const auto& e : events) {
      std::array<char, 9> buf;
      buf[0] = static_cast<char>(e.channel);
      std::uint64_t t = e.timestamp_ticks;
      for (int b = 0; b < 8; ++b) {
        buf[static_cast<std::size_t>(1 + b)] = static_cast<char>(t & 0xFF);
        t >>= 8;
      }
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
  } else {
    for (const auto& e : events) {
      out << static_cast<int>(e.channel) << ',' << e.timestamp_ticks << '\n';
    }
  }
}

}  // namespace ionlink::io
