#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "handy/messages.hpp"
#include "handy/rng.hpp"
#include "handy/wire.hpp"

using namespace handy;

namespace {

std::string randomString(Rng& rng, size_t max_len) {
    size_t len = rng.uniformU32(static_cast<uint32_t>(max_len + 1));
    std::string s;
    s.reserve(len);
    for (size_t i = 0; i < len; ++i)
        s.push_back(static_cast<char>(rng.uniformInt(32, 126)));
    return s;
}

double randomDouble(Rng& rng) {
    switch (rng.uniformU32(6)) {
        case 0: return 0.0;
        case 1: return -0.0;
        case 2: return 1.0 / 3.0;
        case 3: return -1e308;
        case 4: return 0x1.fffffffffffffp-2;
        default: return rng.uniformReal(-1e6, 1e6);
    }
}

QoSSpec randomQos(Rng& rng) {
    QoSSpec q;
    size_t count = rng.uniformU32(4);
    for (size_t i = 0; i < count; ++i)
        q.attributes.push_back({randomString(rng, 12), randomDouble(rng)});
    return q;
}

RouteEntry randomRoute(Rng& rng) {
    RouteEntry r;
    r.sequence_number = static_cast<uint32_t>(rng.nextU64());
    r.destination = rng.uniformU32(64);
    r.hop_count = rng.bernoulli(0.2) ? kUnknownHops
                                     : static_cast<uint16_t>(rng.uniformU32(16));
    // Receiver-local fields are not encoded; keep them default so the
    // round-trip comparison stays meaningful.
    return r;
}

OntologyRecord randomRecord(Rng& rng, bool with_document) {
    OntologyRecord rec;
    rec.name = randomString(rng, 16);
    rec.uri = "tax://" + randomString(rng, 12);
    rec.author = randomString(rng, 8);
    rec.base_ontology = rng.bernoulli(0.5) ? "tax://core" : "";
    if (with_document) {
        OntologyDocument doc;
        doc.name = rec.name;
        doc.uri = rec.uri;
        doc.base_uri = rec.base_ontology;
        doc.author = rec.author;
        size_t edges = rng.uniformInt(1, 4);
        for (size_t i = 0; i < edges; ++i)
            doc.concepts.push_back({randomString(rng, 10), randomString(rng, 10)});
        rec.document = doc;
    }
    return rec;
}

ServiceTableEntry randomEntry(Rng& rng) {
    ServiceTableEntry e;
    e.service_id = rng.uniformInt(1, 200);
    e.name = "svc" + std::to_string(e.service_id);
    e.provider = rng.uniformU32(64);
    e.concept_id = rng.bernoulli(0.8) ? "core." + randomString(rng, 8) : "";
    e.input_interface = randomString(rng, 10);
    e.output_interface = randomString(rng, 10);
    size_t uris = rng.uniformU32(3);
    for (size_t i = 0; i < uris; ++i)
        e.ontology_list.push_back("tax://" + randomString(rng, 8));
    e.qos = randomQos(rng);
    return e;
}

RoutingHeaders randomHeaders(Rng& rng) {
    if (rng.bernoulli(0.5)) {
        AodvHeaders h;
        h.originator = rng.uniformU32(64);
        h.broadcast_id = rng.uniformU32(1000);
        h.originator_seq = rng.uniformU32(1000);
        h.hop_count = static_cast<uint16_t>(rng.uniformU32(16));
        return h;
    }
    DsrHeaders h;
    size_t hops = rng.uniformInt(1, 6);
    for (size_t i = 0; i < hops; ++i) h.hops_traversed.push_back(100 + i);
    return h;
}

SAdvMessage randomAdv(Rng& rng) {
    SAdvMessage m;
    m.message_id = rng.nextU64();
    size_t entries = rng.uniformInt(1, 4);
    for (size_t i = 0; i < entries; ++i) {
        AdvEntry ae;
        ae.service = randomEntry(rng);
        size_t recs = rng.uniformU32(3);
        for (size_t r = 0; r < recs; ++r)
            ae.ontology.push_back(randomRecord(rng, rng.bernoulli(0.3)));
        ae.route = randomRoute(rng);
        m.entries.push_back(std::move(ae));
    }
    return m;
}

SReqMessage randomReq(Rng& rng) {
    SReqMessage m;
    m.message_id = rng.nextU64();
    m.session_id = rng.nextU64();
    m.requested.name = randomString(rng, 12);
    m.requested.concept_id = rng.bernoulli(0.7) ? "core." + randomString(rng, 8) : "";
    m.requested.input_interface = randomString(rng, 8);
    m.requested.output_interface = randomString(rng, 8);
    m.qos = randomQos(rng);
    size_t recs = rng.uniformU32(3);
    for (size_t r = 0; r < recs; ++r)
        m.ontology_list.push_back(randomRecord(rng, rng.bernoulli(0.4)));
    m.routing_headers = randomHeaders(rng);
    m.ttl = static_cast<uint8_t>(rng.uniformU32(16));
    return m;
}

SRepMessage randomRep(Rng& rng) {
    SRepMessage m;
    m.message_id = rng.nextU64();
    m.session_id = rng.nextU64();
    m.requested_service = randomEntry(rng);
    m.requested_route = randomRoute(rng);
    size_t recs = rng.uniformU32(2);
    for (size_t r = 0; r < recs; ++r)
        m.ontology_list.push_back(randomRecord(rng, rng.bernoulli(0.5)));
    m.routing_headers = randomHeaders(rng);
    size_t extra = rng.uniformU32(4);
    for (size_t i = 0; i < extra; ++i) {
        CorrelatedEntry ce;
        ce.service = randomEntry(rng);
        ce.route = randomRoute(rng);
        if (rng.bernoulli(0.4)) ce.ontology.push_back(randomRecord(rng, true));
        m.correlated.push_back(std::move(ce));
    }
    return m;
}

void checkRoundTrip(const Message& msg) {
    std::vector<uint8_t> bytes = serializeMessage(msg);
    CHECK(bytes.size() == wireSize(msg));
    Message back = deserializeMessage(bytes);
    CHECK(back == msg);
}

}  // namespace

TEST_SUITE("wire") {

TEST_CASE("random advertisements survive a round trip") {
    Rng rng(0x5adful);
    for (int i = 0; i < 200; ++i) checkRoundTrip(randomAdv(rng));
}

TEST_CASE("random requests survive a round trip") {
    Rng rng(0x5e9ul);
    for (int i = 0; i < 200; ++i) checkRoundTrip(randomReq(rng));
}

TEST_CASE("random replies survive a round trip") {
    Rng rng(0x5e7ul);
    for (int i = 0; i < 200; ++i) checkRoundTrip(randomRep(rng));
}

TEST_CASE("doubles cross the wire bit-exactly") {
    SReqMessage m;
    m.message_id = 1;
    m.requested.name = "x";
    m.qos.attributes = {{"a", 0x1.fffffffffffffp-2},
                        {"b", -0.0},
                        {"c", 1.0 / 3.0},
                        {"d", 1e-308}};
    m.routing_headers = AodvHeaders{};
    Message back = deserializeMessage(serializeMessage(m));
    const auto& q = std::get<SReqMessage>(back).qos;
    REQUIRE(q.attributes.size() == 4);
    for (size_t i = 0; i < 4; ++i) {
        // Compare representations, not values, so -0.0 != +0.0 here.
        CHECK(std::signbit(q.attributes[i].value) ==
              std::signbit(m.qos.attributes[i].value));
        CHECK(q.attributes[i].value == m.qos.attributes[i].value);
    }
}

TEST_CASE("every truncation of a valid buffer is rejected") {
    Rng rng(0x77ul);
    Message msg = randomRep(rng);
    std::vector<uint8_t> bytes = serializeMessage(msg);
    for (size_t len = 0; len < bytes.size(); ++len)
        CHECK_THROWS_AS(deserializeMessage(bytes.data(), len), WireError);
}

TEST_CASE("trailing garbage is rejected") {
    Rng rng(3);
    std::vector<uint8_t> bytes = serializeMessage(randomReq(rng));
    bytes.push_back(0);
    CHECK_THROWS_AS(deserializeMessage(bytes), WireError);
}

TEST_CASE("unknown type tag is rejected") {
    Rng rng(4);
    std::vector<uint8_t> bytes = serializeMessage(randomAdv(rng));
    bytes[8] = 0x7f;  // type byte follows the u64 message id
    CHECK_THROWS_AS(deserializeMessage(bytes), WireError);
}

TEST_CASE("advertisement with no entries cannot be encoded") {
    SAdvMessage m;
    m.message_id = 9;
    CHECK_THROWS_AS(serializeMessage(Message{m}), WireError);
}

TEST_CASE("crafted zero-entry advertisement body is rejected on decode") {
    SAdvMessage m;
    m.message_id = 9;
    AdvEntry ae;
    ae.service.service_id = 1;
    m.entries.push_back(ae);
    std::vector<uint8_t> bytes = serializeMessage(Message{m});
    // Body starts after id u64 + type u8 + length u32; its first field is the
    // u16 entry count. Zero it and fix the body length.
    size_t header = 8 + 1 + 4;
    bytes.resize(header + 2);
    bytes[header] = 0;
    bytes[header + 1] = 0;
    uint32_t body_len = 2;
    for (int i = 0; i < 4; ++i)
        bytes[9 + i] = static_cast<uint8_t>((body_len >> (8 * i)) & 0xff);
    CHECK_THROWS_AS(deserializeMessage(bytes), WireError);
}

}  // TEST_SUITE
