// The example repository used throughout the docs and tests: three items,
// record1 in oai_dc and wibble, record2 in oai_dc, record3 deleted.
//
// record1's datestamp is not published anywhere; 1998-01-01 is used. Any
// date on or before 2000-01-01 keeps ListIdentifiers&until=2000-01-01
// returning record1 and record2 only.

#include "oai/store.hpp"
#include "oai/wire.hpp"

namespace oai::store {

namespace {

StoredItem dc_item(std::string id, Datestamp stamp, std::vector<wire::DcField> fields) {
  StoredItem item{ItemIdentifier(std::move(id)), stamp, false, {}};
  item.payloads.emplace(std::string(kDcPrefix), wire::render_dc(fields));
  return item;
}

}  // namespace

Catalog fixture_catalog() {
  Catalog catalog({MetadataFormatDescriptor("wibble", "http://wibble.org/wibble.xsd"),
                   MetadataFormatDescriptor::dublin_core()});

  StoredItem record1 = dc_item("record1", Datestamp(1998, 1, 1),
                               {{"title", "Item 1"}, {"creator", "A N Author"}});
  record1.payloads.emplace(
      "wibble",
      XmlFragment("<wibble xmlns=\"http://wibble.org/\" "
                  "xmlns:xsi=\"http://www.w3.org/2000/10/XMLSchema-instance\" "
                  "xsi:schemaLocation=\"http://wibble.org/ http://wibble.org/wibble.xsd\">\n"
                  " <wobble>Item 1</wobble>\n"
                  "</wibble>"));
  catalog.upsert_item(std::move(record1));

  catalog.upsert_item(dc_item("record2", Datestamp(1999, 2, 12),
                              {{"title", "Item 2"}, {"creator", "A N Other"}}));

  catalog.upsert_item(StoredItem{ItemIdentifier("record3"), Datestamp(2000, 3, 13), true, {}});
  return catalog;
}

StoredItem fixture_record4() {
  return dc_item("record4", Datestamp(2001, 6, 5), {{"title", "Item 4"}, {"creator", "Someone Else"}});
}

}  // namespace oai::store
