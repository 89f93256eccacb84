#include "handy/wire.hpp"

#include <bit>
#include <cstring>

namespace handy {
namespace {

constexpr size_t kHeaderBytes = 13;  // message_id u64 + type u8 + body_length u32
constexpr size_t kLengthOffset = 9;

class WireWriter {
  public:
    explicit WireWriter(std::vector<uint8_t>& out) : out_(out) {}

    void u8(uint8_t v) { out_.push_back(v); }

    void u16(uint16_t v) {
        out_.push_back(static_cast<uint8_t>(v));
        out_.push_back(static_cast<uint8_t>(v >> 8));
    }

    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }

    void str(const std::string& s) {
        if (s.size() > 0xffff) throw WireError("string field exceeds 65535 bytes");
        u16(static_cast<uint16_t>(s.size()));
        out_.insert(out_.end(), s.begin(), s.end());
    }

    void count16(size_t n, const char* what) {
        if (n > 0xffff) throw WireError(std::string(what) + " list exceeds 65535 entries");
        u16(static_cast<uint16_t>(n));
    }

    size_t size() const { return out_.size(); }

    void patchU32(size_t at, uint32_t v) {
        for (int i = 0; i < 4; ++i) out_[at + i] = static_cast<uint8_t>(v >> (8 * i));
    }

  private:
    std::vector<uint8_t>& out_;
};

class WireReader {
  public:
    WireReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}

    uint8_t u8() {
        need(1);
        return data_[pos_++];
    }

    uint16_t u16() {
        need(2);
        auto v = static_cast<uint16_t>(data_[pos_] | (uint32_t{data_[pos_ + 1]} << 8));
        pos_ += 2;
        return v;
    }

    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= uint32_t{data_[pos_ + i]} << (8 * i);
        pos_ += 4;
        return v;
    }

    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= uint64_t{data_[pos_ + i]} << (8 * i);
        pos_ += 8;
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::string str() {
        uint16_t n = u16();
        need(n);
        std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
        pos_ += n;
        return s;
    }

    size_t pos() const { return pos_; }

  private:
    void need(size_t n) {
        if (size_ - pos_ < n) throw WireError("message truncated");
    }

    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
};

void writeQoS(WireWriter& w, const QoSSpec& q) {
    w.count16(q.attributes.size(), "qos attribute");
    for (const auto& a : q.attributes) {
        w.str(a.name);
        w.f64(a.value);
    }
}

QoSSpec readQoS(WireReader& r) {
    QoSSpec q;
    uint16_t n = r.u16();
    q.attributes.reserve(n);
    for (uint16_t i = 0; i < n; ++i) {
        QoSAttribute a;
        a.name = r.str();
        a.value = r.f64();
        q.attributes.push_back(std::move(a));
    }
    return q;
}

void writeDescription(WireWriter& w, const ServiceDescription& d) {
    w.str(d.name);
    w.str(d.concept_id);
    w.str(d.input_interface);
    w.str(d.output_interface);
}

ServiceDescription readDescription(WireReader& r) {
    ServiceDescription d;
    d.name = r.str();
    d.concept_id = r.str();
    d.input_interface = r.str();
    d.output_interface = r.str();
    return d;
}

void writeTableEntry(WireWriter& w, const ServiceTableEntry& e) {
    w.u32(e.service_id);
    w.str(e.name);
    w.u32(e.provider);
    w.str(e.concept_id);
    w.str(e.input_interface);
    w.str(e.output_interface);
    w.count16(e.ontology_list.size(), "ontology uri");
    for (const auto& uri : e.ontology_list) w.str(uri);
    writeQoS(w, e.qos);
}

ServiceTableEntry readTableEntry(WireReader& r) {
    ServiceTableEntry e;
    e.service_id = r.u32();
    e.name = r.str();
    e.provider = r.u32();
    e.concept_id = r.str();
    e.input_interface = r.str();
    e.output_interface = r.str();
    uint16_t n = r.u16();
    e.ontology_list.reserve(n);
    for (uint16_t i = 0; i < n; ++i) e.ontology_list.push_back(r.str());
    e.qos = readQoS(r);
    return e;
}

void writeRoute(WireWriter& w, const RouteEntry& e) {
    w.u32(e.destination);
    w.u32(e.sequence_number);
    w.u16(e.hop_count);
}

RouteEntry readRoute(WireReader& r) {
    RouteEntry e;
    e.destination = r.u32();
    e.sequence_number = r.u32();
    e.hop_count = r.u16();
    return e;
}

void writeDocument(WireWriter& w, const OntologyDocument& d) {
    w.str(d.name);
    w.str(d.uri);
    w.str(d.base_uri);
    w.str(d.author);
    w.count16(d.concepts.size(), "concept edge");
    for (const auto& c : d.concepts) {
        w.str(c.child);
        w.str(c.parent);
    }
}

OntologyDocument readDocument(WireReader& r) {
    OntologyDocument d;
    d.name = r.str();
    d.uri = r.str();
    d.base_uri = r.str();
    d.author = r.str();
    uint16_t n = r.u16();
    d.concepts.reserve(n);
    for (uint16_t i = 0; i < n; ++i) {
        ConceptEdge c;
        c.child = r.str();
        c.parent = r.str();
        d.concepts.push_back(std::move(c));
    }
    return d;
}

void writeRecord(WireWriter& w, const OntologyRecord& rec) {
    w.str(rec.name);
    w.str(rec.uri);
    w.str(rec.author);
    w.str(rec.base_ontology);
    w.u8(rec.document.has_value() ? 1 : 0);
    if (rec.document) writeDocument(w, *rec.document);
}

OntologyRecord readRecord(WireReader& r) {
    OntologyRecord rec;
    rec.name = r.str();
    rec.uri = r.str();
    rec.author = r.str();
    rec.base_ontology = r.str();
    uint8_t has_doc = r.u8();
    if (has_doc > 1) throw WireError("bad document flag");
    if (has_doc) rec.document = readDocument(r);
    return rec;
}

void writeRecordList(WireWriter& w, const std::vector<OntologyRecord>& recs) {
    w.count16(recs.size(), "ontology record");
    for (const auto& rec : recs) writeRecord(w, rec);
}

std::vector<OntologyRecord> readRecordList(WireReader& r) {
    uint16_t n = r.u16();
    std::vector<OntologyRecord> recs;
    recs.reserve(n);
    for (uint16_t i = 0; i < n; ++i) recs.push_back(readRecord(r));
    return recs;
}

void writeRoutingHeaders(WireWriter& w, const RoutingHeaders& h) {
    if (const auto* aodv = std::get_if<AodvHeaders>(&h)) {
        w.u8(0);
        w.u32(aodv->originator);
        w.u32(aodv->broadcast_id);
        w.u32(aodv->originator_seq);
        w.u16(aodv->hop_count);
    } else {
        const auto& dsr = std::get<DsrHeaders>(h);
        w.u8(1);
        w.count16(dsr.hops_traversed.size(), "source route hop");
        for (NodeId n : dsr.hops_traversed) w.u32(n);
    }
}

RoutingHeaders readRoutingHeaders(WireReader& r) {
    uint8_t tag = r.u8();
    if (tag == 0) {
        AodvHeaders h;
        h.originator = r.u32();
        h.broadcast_id = r.u32();
        h.originator_seq = r.u32();
        h.hop_count = r.u16();
        return h;
    }
    if (tag == 1) {
        DsrHeaders h;
        uint16_t n = r.u16();
        h.hops_traversed.reserve(n);
        for (uint16_t i = 0; i < n; ++i) h.hops_traversed.push_back(r.u32());
        return h;
    }
    throw WireError("unknown routing header tag");
}

void writeBody(WireWriter& w, const SAdvMessage& m) {
    if (m.entries.empty()) throw WireError("advertisement with no entries");
    w.count16(m.entries.size(), "advertisement entry");
    for (const auto& e : m.entries) {
        writeTableEntry(w, e.service);
        writeRecordList(w, e.ontology);
        writeRoute(w, e.route);
    }
}

void writeBody(WireWriter& w, const SReqMessage& m) {
    w.u64(m.session_id);
    writeDescription(w, m.requested);
    writeQoS(w, m.qos);
    writeRecordList(w, m.ontology_list);
    writeRoutingHeaders(w, m.routing_headers);
    w.u8(m.ttl);
}

void writeBody(WireWriter& w, const SRepMessage& m) {
    w.u64(m.session_id);
    writeTableEntry(w, m.requested_service);
    writeRoute(w, m.requested_route);
    writeRecordList(w, m.ontology_list);
    writeRoutingHeaders(w, m.routing_headers);
    w.count16(m.correlated.size(), "piggybacked entry");
    for (const auto& c : m.correlated) {
        writeTableEntry(w, c.service);
        writeRoute(w, c.route);
        writeRecordList(w, c.ontology);
    }
}

SAdvMessage readAdvBody(WireReader& r) {
    SAdvMessage m;
    uint16_t n = r.u16();
    if (n == 0) throw WireError("advertisement with no entries");
    m.entries.reserve(n);
    for (uint16_t i = 0; i < n; ++i) {
        AdvEntry e;
        e.service = readTableEntry(r);
        e.ontology = readRecordList(r);
        e.route = readRoute(r);
        m.entries.push_back(std::move(e));
    }
    return m;
}

SReqMessage readReqBody(WireReader& r) {
    SReqMessage m;
    m.session_id = r.u64();
    m.requested = readDescription(r);
    m.qos = readQoS(r);
    m.ontology_list = readRecordList(r);
    m.routing_headers = readRoutingHeaders(r);
    m.ttl = r.u8();
    return m;
}

SRepMessage readRepBody(WireReader& r) {
    SRepMessage m;
    m.session_id = r.u64();
    m.requested_service = readTableEntry(r);
    m.requested_route = readRoute(r);
    m.ontology_list = readRecordList(r);
    m.routing_headers = readRoutingHeaders(r);
    uint16_t n = r.u16();
    m.correlated.reserve(n);
    for (uint16_t i = 0; i < n; ++i) {
        CorrelatedEntry c;
        c.service = readTableEntry(r);
        c.route = readRoute(r);
        c.ontology = readRecordList(r);
        m.correlated.push_back(std::move(c));
    }
    return m;
}

void serializeInto(const Message& msg, std::vector<uint8_t>& out) {
    out.clear();
    WireWriter w(out);
    std::visit([&](const auto& m) { w.u64(m.message_id); }, msg);
    w.u8(static_cast<uint8_t>(messageTypeOf(msg)));
    w.u32(0);  // body length, patched below
    std::visit([&](const auto& m) { writeBody(w, m); }, msg);
    size_t body = w.size() - kHeaderBytes;
    if (body > 0xffffffffu) throw WireError("message body exceeds u32 length");
    w.patchU32(kLengthOffset, static_cast<uint32_t>(body));
}

}  // namespace

std::vector<uint8_t> serializeMessage(const Message& msg) {
    std::vector<uint8_t> out;
    serializeInto(msg, out);
    return out;
}

Message deserializeMessage(const uint8_t* data, size_t size) {
    if (size < kHeaderBytes) throw WireError("message truncated");
    WireReader r(data, size);
    uint64_t message_id = r.u64();
    uint8_t type = r.u8();
    uint32_t body_length = r.u32();
    if (size != kHeaderBytes + body_length)
        throw WireError("body length does not match buffer");

    Message msg;
    switch (type) {
        case static_cast<uint8_t>(MessageType::SADV): {
            SAdvMessage m = readAdvBody(r);
            m.message_id = message_id;
            msg = std::move(m);
            break;
        }
        case static_cast<uint8_t>(MessageType::SREQ): {
            SReqMessage m = readReqBody(r);
            m.message_id = message_id;
            msg = std::move(m);
            break;
        }
        case static_cast<uint8_t>(MessageType::SREP): {
            SRepMessage m = readRepBody(r);
            m.message_id = message_id;
            msg = std::move(m);
            break;
        }
        default:
            throw WireError("unknown message type");
    }
    if (r.pos() != size) throw WireError("trailing bytes after body");
    return msg;
}

Message deserializeMessage(const std::vector<uint8_t>& buffer) {
    return deserializeMessage(buffer.data(), buffer.size());
}

size_t wireSize(const Message& msg) {
    thread_local std::vector<uint8_t> scratch;
    serializeInto(msg, scratch);
    return scratch.size();
}

}  // namespace handy
