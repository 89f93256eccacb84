// Binary encode/decode for the three message types.
//
// Layout, little-endian throughout:
//   message_id u64 | type u8 | body_length u32 | body
// SREQ and SREP bodies begin with session_id u64. Strings are u16 length
// prefixed, doubles travel as IEEE-754 bits. Route entries carry only the
// protocol-visible triple (destination, sequence number, hop count); next
// hop, status and precursors are receiver-local and never encoded.
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "handy/messages.hpp"

namespace handy {

class WireError : public std::runtime_error {
  public:
    explicit WireError(const std::string& what) : std::runtime_error(what) {}
};

// Throws WireError on unencodable content (an advertisement with no entries,
// a string or list exceeding its length prefix).
std::vector<uint8_t> serializeMessage(const Message& msg);

// Throws WireError on truncation, unknown type tag, a body length that does
// not match the buffer, or a body that decodes to the wrong size.
Message deserializeMessage(const uint8_t* data, size_t size);
Message deserializeMessage(const std::vector<uint8_t>& buffer);

// Encoded size in bytes, used for transmission delay.
size_t wireSize(const Message& msg);

}  // namespace handy
