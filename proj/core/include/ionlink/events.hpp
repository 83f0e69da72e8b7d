#pragma once

#include <iosfwd>
#include <vector>

#include "ionlink/photons.hpp"

// Timestamped-detection file formats.  Text (default): one `channel,ticks`
// record per line with tick = 4 ps.  Binary (flagged): fixed-width 9-byte
// little-endian records, 1 byte channel + 8 bytes tick count.

namespace ionlink::io {

// Parses, validates and sorts; throws parse_error with the offending line
// number on malformed input or a channel outside {0, 1}.
std::vector<photons::EventRecord> parse_event_stream(std::istream& in, bool binary = false);

// Records are written in sorted order so timestamps are nondecreasing
// within a file.
void write_event_stream(std::ostream& out, std::vector<photons::EventRecord> events,
                        bool binary = false);

}  // namespace ionlink::io
