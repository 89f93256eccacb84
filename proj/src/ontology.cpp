#include "handy/ontology.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace handy {
namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parseFail(const std::string& origin, size_t line, const std::string& why) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + why);
}

}  // namespace

OntologyDocument parseTaxonomy(const std::string& text, const std::string& origin) {
    OntologyDocument doc;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;

        auto arrow = line.find("->");
        if (arrow != std::string::npos) {
            ConceptEdge edge;
            edge.child = trim(line.substr(0, arrow));
            edge.parent = trim(line.substr(arrow + 2));
            if (edge.child.empty() || edge.parent.empty())
                parseFail(origin, line_no, "expected 'child -> parent'");
            doc.concepts.push_back(std::move(edge));
            continue;
        }

        auto colon = line.find(':');
        if (colon == std::string::npos)
            parseFail(origin, line_no, "expected a 'key: value' header or an edge");
        std::string key = trim(line.substr(0, colon));
        std::string value = trim(line.substr(colon + 1));
        if (key == "name")
            doc.name = value;
        else if (key == "uri")
            doc.uri = value;
        else if (key == "base")
            doc.base_uri = value;
        else if (key == "author")
            doc.author = value;
        else
            parseFail(origin, line_no, "unknown header '" + key + "'");
    }
    if (doc.uri.empty()) parseFail(origin, line_no, "document has no uri header");
    if (doc.name.empty()) doc.name = doc.uri;
    return doc;
}

std::string formatTaxonomy(const OntologyDocument& doc) {
    std::ostringstream out;
    out << "name: " << doc.name << '\n';
    out << "uri: " << doc.uri << '\n';
    if (!doc.base_uri.empty()) out << "base: " << doc.base_uri << '\n';
    if (!doc.author.empty()) out << "author: " << doc.author << '\n';
    for (const auto& edge : doc.concepts)
        out << edge.child << " -> " << edge.parent << '\n';
    return out.str();
}

OntologyDocument loadTaxonomyFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open taxonomy file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parseTaxonomy(text.str(), path);
}

bool OntologyStore::loadDocument(const OntologyDocument& doc) {
    if (docs_.count(doc.uri)) return false;
    docs_[doc.uri] = doc;
    for (const auto& edge : doc.concepts) {
        parent_.emplace(edge.child, edge.parent);
        known_.insert(edge.child);
        known_.insert(edge.parent);
        ++edge_count_;
    }
    return true;
}

bool OntologyStore::hasDocument(const std::string& uri) const {
    return docs_.count(uri) != 0;
}

const OntologyDocument* OntologyStore::document(const std::string& uri) const {
    auto it = docs_.find(uri);
    return it == docs_.end() ? nullptr : &it->second;
}

bool OntologyStore::knowsConcept(const std::string& concept_id) const {
    return known_.count(concept_id) != 0;
}

bool OntologyStore::subsumes(const std::string& ancestor,
                             const std::string& descendant) const {
    if (ancestor == descendant) return true;
    std::string at = descendant;
    for (size_t steps = 0; steps <= parent_.size(); ++steps) {
        auto it = parent_.find(at);
        if (it == parent_.end()) return false;
        at = it->second;
        if (at == ancestor) return true;
    }
    return false;  // cycle guard
}

std::vector<std::string> OntologyStore::loadedUris() const {
    std::vector<std::string> out;
    out.reserve(docs_.size());
    for (const auto& [uri, doc] : docs_) out.push_back(uri);
    return out;
}

MatchDecision matchService(const OntologyStore& store,
                           const std::vector<const ServiceTableEntry*>& candidates,
                           const ServiceDescription& wanted, const QoSSpec& qos) {
    std::vector<std::string> missing;
    for (const ServiceTableEntry* e : candidates) {
        if (!qosSatisfies(qos, e->qos)) continue;

        if (!wanted.name.empty() && wanted.name == e->name)
            return {MatchDecision::Kind::Match, e, {}};
        if (wanted.concept_id.empty() || e->concept_id.empty()) continue;
        if (wanted.concept_id == e->concept_id)
            return {MatchDecision::Kind::Match, e, {}};

        bool wanted_known = store.knowsConcept(wanted.concept_id);
        bool entry_known = store.knowsConcept(e->concept_id);
        if (wanted_known && entry_known) {
            if (store.subsumes(wanted.concept_id, e->concept_id))
                return {MatchDecision::Kind::Match, e, {}};
            continue;
        }
        // Undecidable here: the entry names the documents that define its
        // concept; anything not yet loaded is worth fetching.
        if (!entry_known)
            for (const auto& uri : e->ontology_list)
                if (!store.hasDocument(uri)) missing.push_back(uri);
    }
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
        return {MatchDecision::Kind::NeedOntology, nullptr, std::move(missing)};
    }
    return {MatchDecision::Kind::NoMatch, nullptr, {}};
}

}  // namespace handy
