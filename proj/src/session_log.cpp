#include "handy/session_log.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace handy {

LogDatabase::LogDatabase(size_t capacity, double session_gap)
    : capacity_(capacity), session_gap_(session_gap) {
    if (capacity_ == 0) throw std::invalid_argument("log capacity must be positive");
    if (session_gap_ <= 0.0) throw std::invalid_argument("session gap must be positive");
}

void LogDatabase::logRequest(ServiceId service, double time, uint64_t stream) {
    if (!entries_.empty() && time < entries_.back().time)
        throw std::invalid_argument("request time moved backwards");
    if (entries_.size() == capacity_) entries_.pop_front();
    entries_.push_back({service, time, stream});
    ++revision_;
}

std::vector<std::vector<ServiceId>> LogDatabase::sessions() const {
    std::vector<std::vector<ServiceId>> out;
    std::map<uint64_t, std::pair<double, size_t>> open;  // stream -> last time, index
    for (const Entry& e : entries_) {
        auto it = open.find(e.stream);
        if (it == open.end() || e.time - it->second.first >= session_gap_) {
            out.emplace_back();
            open[e.stream] = {e.time, out.size() - 1};
            it = open.find(e.stream);
        }
        it->second.first = e.time;
        out[it->second.second].push_back(e.service);
    }
    return out;
}

std::vector<std::vector<ServiceId>> loadSessionFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open session file: " + path);
    std::vector<std::vector<ServiceId>> sessions;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::vector<ServiceId> session;
        long long id;
        while (fields >> id) {
            if (id < 0 || id > 0xffffffffLL)
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": service id out of range");
            session.push_back(static_cast<ServiceId>(id));
        }
        if (!fields.eof())
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected whitespace separated service ids");
        if (!session.empty()) sessions.push_back(std::move(session));
    }
    return sessions;
}

void saveSessionFile(const std::string& path,
                     const std::vector<std::vector<ServiceId>>& sessions) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write session file: " + path);
    for (const auto& session : sessions) {
        for (size_t i = 0; i < session.size(); ++i) {
            if (i) out << ' ';
            out << session[i];
        }
        out << '\n';
    }
}

}  // namespace handy
