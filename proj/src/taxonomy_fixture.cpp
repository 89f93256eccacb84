#include "handy/taxonomy_fixture.hpp"

namespace handy {
namespace {

OntologyDocument makeDoc(std::string name, std::string uri, std::string base,
                         std::string author,
                         std::vector<std::pair<const char*, const char*>> edges) {
    OntologyDocument doc;
    doc.name = std::move(name);
    doc.uri = std::move(uri);
    doc.base_uri = std::move(base);
    doc.author = std::move(author);
    doc.concepts.reserve(edges.size());
    for (const auto& [child, parent] : edges) doc.concepts.push_back({child, parent});
    return doc;
}

}  // namespace

OntologyDocument coreTaxonomy() {
    return makeDoc("Core Services", kCoreTaxonomyUri, "", "core-wg",
                   {
                       {"core.media", "core.service"},
                       {"core.communication", "core.service"},
                       {"core.navigation", "core.service"},
                       {"core.information", "core.service"},
                       {"core.utility", "core.service"},
                       {"core.media.video", "core.media"},
                       {"core.media.audio", "core.media"},
                       {"core.media.image", "core.media"},
                       {"core.communication.messaging", "core.communication"},
                       {"core.communication.voice", "core.communication"},
                       {"core.navigation.maps", "core.navigation"},
                       {"core.navigation.traffic", "core.navigation"},
                       {"core.information.news", "core.information"},
                       {"core.information.weather", "core.information"},
                       {"core.utility.storage", "core.utility"},
                       {"core.utility.compute", "core.utility"},
                       {"core.ontology_document", "core.utility"},
                   });
}

std::vector<OntologyDocument> extensionTaxonomies() {
    std::vector<OntologyDocument> docs;
    docs.push_back(makeDoc("Streaming", "tax://ext/streaming", kCoreTaxonomyUri,
                           "streaming-wg",
                           {
                               {"ext.streaming.live", "core.media.video"},
                               {"ext.streaming.vod", "core.media.video"},
                               {"ext.streaming.radio", "core.media.audio"},
                           }));
    docs.push_back(makeDoc("Social", "tax://ext/social", kCoreTaxonomyUri, "social-wg",
                           {
                               {"ext.social.chat", "core.communication.messaging"},
                               {"ext.social.presence", "core.communication.messaging"},
                               {"ext.social.calls", "core.communication.voice"},
                           }));
    docs.push_back(makeDoc("Geo", "tax://ext/geo", kCoreTaxonomyUri, "geo-wg",
                           {
                               {"ext.geo.routing", "core.navigation.maps"},
                               {"ext.geo.pois", "core.navigation.maps"},
                               {"ext.geo.congestion", "core.navigation.traffic"},
                           }));
    docs.push_back(makeDoc("Feeds", "tax://ext/feeds", kCoreTaxonomyUri, "feeds-wg",
                           {
                               {"ext.feeds.headlines", "core.information.news"},
                               {"ext.feeds.sports", "core.information.news"},
                               {"ext.feeds.forecast", "core.information.weather"},
                           }));
    docs.push_back(makeDoc("Cloud", "tax://ext/cloud", kCoreTaxonomyUri, "cloud-wg",
                           {
                               {"ext.cloud.backup", "core.utility.storage"},
                               {"ext.cloud.sync", "core.utility.storage"},
                               {"ext.cloud.batch", "core.utility.compute"},
                           }));
    docs.push_back(makeDoc("Gallery", "tax://ext/gallery", kCoreTaxonomyUri,
                           "gallery-wg",
                           {
                               {"ext.gallery.photos", "core.media.image"},
                               {"ext.gallery.albums", "core.media.image"},
                               {"ext.gallery.clips", "core.media.video"},
                           }));
    return docs;
}

}  // namespace handy
