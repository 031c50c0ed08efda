#include "oai/store.hpp"

#include <algorithm>
#include <mutex>

#include "xml_dom.hpp"

namespace oai::store {

Catalog::Catalog(std::vector<MetadataFormatDescriptor> formats, CatalogPolicy policy)
    : policy_(policy) {
  for (auto& f : formats) add_format(std::move(f));
  if (!find_format(kDcPrefix)) formats_.push_back(MetadataFormatDescriptor::dublin_core());
}

std::optional<MetadataFormatDescriptor> Catalog::find_format(std::string_view prefix) const {
  for (const auto& f : formats_) {
    if (f.prefix() == prefix) return f;
  }
  return std::nullopt;
}

const StoredItem& Catalog::get_item(const ItemIdentifier& id) const {
  const auto it = items_.find(id.value());
  if (it == items_.end()) throw NotFound("no item '" + id.value() + "'");
  return it->second;
}

bool Catalog::contains(const ItemIdentifier& id) const { return items_.contains(id.value()); }

std::vector<StoredItem> Catalog::items() const {
  std::vector<StoredItem> out;
  out.reserve(items_.size());
  for (const auto& [key, item] : items_) out.push_back(item);
  return out;
}

std::vector<RecordHeader> Catalog::ids_by_date(std::optional<Datestamp> from,
                                               std::optional<Datestamp> until) const {
  std::vector<RecordHeader> out;
  for (const auto& [key, item] : items_) {
    if (from && item.datestamp < *from) continue;
    if (until && *until < item.datestamp) continue;
    out.push_back(RecordHeader{item.identifier, item.datestamp, item.deleted});
  }
  std::stable_sort(out.begin(), out.end(), [](const RecordHeader& a, const RecordHeader& b) {
    return a.datestamp < b.datestamp;
  });
  return out;
}

std::optional<XmlFragment> Catalog::disseminate(const ItemIdentifier& id, std::string_view prefix) const {
  const StoredItem& item = get_item(id);
  if (item.deleted) return std::nullopt;
  const auto it = item.payloads.find(prefix);
  if (it == item.payloads.end()) return std::nullopt;
  return it->second;
}

std::vector<MetadataFormatDescriptor> Catalog::formats_for(const std::optional<ItemIdentifier>& id) const {
  if (!id) return formats_;
  const StoredItem& item = get_item(*id);
  std::vector<MetadataFormatDescriptor> out;
  for (const auto& f : formats_) {
    if (item.payloads.contains(f.prefix())) out.push_back(f);
  }
  return out;
}

void Catalog::add_format(MetadataFormatDescriptor format) {
  for (auto& f : formats_) {
    if (f.prefix() == format.prefix()) {
      f = std::move(format);
      return;
    }
  }
  formats_.push_back(std::move(format));
}

void Catalog::check_item(const StoredItem& item) const {
  const std::string& id = item.identifier.value();
  if (item.deleted && !item.payloads.empty()) {
    throw InvalidValue("deleted item '" + id + "' carries payloads");
  }
  if (!item.deleted && policy_.require_dc && !item.payloads.contains(kDcPrefix)) {
    throw InvalidValue("item '" + id + "' has no oai_dc payload");
  }
  for (const auto& [prefix, payload] : item.payloads) {
    if (!find_format(prefix)) {
      throw UnknownFormat("item '" + id + "' uses unregistered format '" + prefix + "'");
    }
    if (!detail::is_single_element(payload.text())) {
      throw InvalidValue("item '" + id + "' has a malformed '" + prefix + "' payload");
    }
  }
}

void Catalog::upsert_item(StoredItem item, std::span<const MetadataFormatDescriptor> new_formats) {
  const auto saved_formats = formats_;
  for (const auto& f : new_formats) add_format(f);
  try {
    check_item(item);
  } catch (...) {
    formats_ = saved_formats;
    throw;
  }
  const std::string key = item.identifier.value();
  items_.insert_or_assign(key, std::move(item));
}

// ---------------------------------------------------------------------------

StoredItem MemoryStore::get_item(const ItemIdentifier& id) const {
  std::shared_lock lock(mutex_);
  return catalog_.get_item(id);
}

std::vector<RecordHeader> MemoryStore::ids_by_date(std::optional<Datestamp> from,
                                                   std::optional<Datestamp> until) const {
  std::shared_lock lock(mutex_);
  return catalog_.ids_by_date(from, until);
}

std::optional<XmlFragment> MemoryStore::disseminate(const ItemIdentifier& id,
                                                    std::string_view prefix) const {
  std::shared_lock lock(mutex_);
  return catalog_.disseminate(id, prefix);
}

std::vector<MetadataFormatDescriptor> MemoryStore::formats_for(
    const std::optional<ItemIdentifier>& id) const {
  std::shared_lock lock(mutex_);
  return catalog_.formats_for(id);
}

std::optional<MetadataFormatDescriptor> MemoryStore::find_format(std::string_view prefix) const {
  std::shared_lock lock(mutex_);
  return catalog_.find_format(prefix);
}

void MemoryStore::upsert_item(StoredItem item, std::span<const MetadataFormatDescriptor> new_formats) {
  std::vector<StoredItem> batch;
  batch.push_back(std::move(item));
  upsert_items(std::move(batch), new_formats);
}

void MemoryStore::upsert_items(std::vector<StoredItem> items,
                               std::span<const MetadataFormatDescriptor> new_formats) {
  std::unique_lock lock(mutex_);
  Catalog next = catalog_;
  for (const auto& f : new_formats) next.add_format(f);
  for (auto& item : items) next.upsert_item(std::move(item));
  if (next == catalog_) return;
  committed(next);
  catalog_ = std::move(next);
}

Catalog MemoryStore::snapshot() const {
  std::shared_lock lock(mutex_);
  return catalog_;
}

}  // namespace oai::store
