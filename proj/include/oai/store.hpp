#pragma once

// Provider-side persistence: items with datestamps, deletion status and
// per-format payloads. Catalog is the plain value holding the data and all
// query logic; MemoryStore and FileStore share one behind RecordStore.

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oai/model.hpp"

namespace oai::store {

struct StoredItem {
  ItemIdentifier identifier;
  Datestamp datestamp;
  bool deleted = false;
  /// prefix -> payload element. Empty when deleted.
  std::map<std::string, XmlFragment, std::less<>> payloads;

  bool operator==(const StoredItem&) const = default;
};

struct CatalogPolicy {
  /// Every live item must carry an oai_dc payload. Harvest copies made in a
  /// single non-DC format switch this off.
  bool require_dc = true;

  bool operator==(const CatalogPolicy&) const = default;
};

class Catalog {
 public:
  /// formats is extended with oai_dc when missing; order is preserved.
  explicit Catalog(std::vector<MetadataFormatDescriptor> formats = {}, CatalogPolicy policy = {});

  const CatalogPolicy& policy() const noexcept { return policy_; }
  const std::vector<MetadataFormatDescriptor>& formats() const noexcept { return formats_; }
  std::optional<MetadataFormatDescriptor> find_format(std::string_view prefix) const;

  /// Throws NotFound.
  const StoredItem& get_item(const ItemIdentifier& id) const;
  bool contains(const ItemIdentifier& id) const;
  std::size_t size() const noexcept { return items_.size(); }
  /// All items, identifier order.
  std::vector<StoredItem> items() const;

  /// Headers with from <= datestamp <= until (absent bound = unbounded),
  /// deleted items included, ordered by (datestamp, identifier).
  std::vector<RecordHeader> ids_by_date(std::optional<Datestamp> from,
                                        std::optional<Datestamp> until) const;

  std::optional<XmlFragment> disseminate(const ItemIdentifier& id, std::string_view prefix) const;

  /// Without id the catalog's whole list; with id the descriptors of that
  /// item's payloads in catalog order. Throws NotFound for an unknown id.
  std::vector<MetadataFormatDescriptor> formats_for(const std::optional<ItemIdentifier>& id) const;

  /// Registers a descriptor, replacing one with the same prefix.
  void add_format(MetadataFormatDescriptor format);

  /// Inserts or replaces by identifier. new_formats are registered first.
  /// Throws UnknownFormat for a payload prefix without a descriptor and
  /// InvalidValue when the item breaks an invariant.
  void upsert_item(StoredItem item, std::span<const MetadataFormatDescriptor> new_formats = {});

  bool operator==(const Catalog&) const = default;

 private:
  void check_item(const StoredItem& item) const;

  std::vector<MetadataFormatDescriptor> formats_;
  std::map<std::string, StoredItem, std::less<>> items_;
  CatalogPolicy policy_;
};

/// Thread-safe store interface. Readers see a catalog either entirely before
/// or entirely after any upsert.
class RecordStore {
 public:
  virtual ~RecordStore() = default;

  virtual StoredItem get_item(const ItemIdentifier& id) const = 0;
  virtual std::vector<RecordHeader> ids_by_date(std::optional<Datestamp> from,
                                                std::optional<Datestamp> until) const = 0;
  virtual std::optional<XmlFragment> disseminate(const ItemIdentifier& id,
                                                 std::string_view prefix) const = 0;
  virtual std::vector<MetadataFormatDescriptor> formats_for(
      const std::optional<ItemIdentifier>& id) const = 0;
  virtual std::optional<MetadataFormatDescriptor> find_format(std::string_view prefix) const = 0;
  virtual void upsert_item(StoredItem item, std::span<const MetadataFormatDescriptor> new_formats) = 0;
  /// Applies a batch atomically with respect to readers.
  virtual void upsert_items(std::vector<StoredItem> items,
                            std::span<const MetadataFormatDescriptor> new_formats) = 0;
  virtual Catalog snapshot() const = 0;

  void upsert_item(StoredItem item) { upsert_item(std::move(item), {}); }
};

class MemoryStore : public RecordStore {
 public:
  explicit MemoryStore(Catalog catalog = Catalog{}) : catalog_(std::move(catalog)) {}

  StoredItem get_item(const ItemIdentifier& id) const override;
  std::vector<RecordHeader> ids_by_date(std::optional<Datestamp> from,
                                        std::optional<Datestamp> until) const override;
  std::optional<XmlFragment> disseminate(const ItemIdentifier& id,
                                         std::string_view prefix) const override;
  std::vector<MetadataFormatDescriptor> formats_for(
      const std::optional<ItemIdentifier>& id) const override;
  std::optional<MetadataFormatDescriptor> find_format(std::string_view prefix) const override;
  using RecordStore::upsert_item;
  void upsert_item(StoredItem item, std::span<const MetadataFormatDescriptor> new_formats) override;
  void upsert_items(std::vector<StoredItem> items,
                    std::span<const MetadataFormatDescriptor> new_formats) override;
  Catalog snapshot() const override;

 protected:
  /// Called with the exclusive lock held after a successful mutation.
  virtual void committed(const Catalog&) {}

 private:
  mutable std::shared_mutex mutex_;
  Catalog catalog_;
};

/// A MemoryStore persisted to one XML catalog file. The file is rewritten
/// atomically (temp file + rename) after every mutation.
///
///   <catalog>
///    <format prefix="oai_dc" schema="..." [namespace="..."]/>
///    <item identifier="record1" datestamp="1998-01-01">
///     <payload prefix="oai_dc"><oai_dc ...>...</oai_dc></payload>
///    </item>
///    <item identifier="record3" datestamp="2000-03-13" deleted="true"/>
///   </catalog>
///
/// The root carries require-dc="false" when the catalog policy is relaxed.
class FileStore : public MemoryStore {
 public:
  /// Loads path, or starts an empty catalog with policy when it does not exist.
  explicit FileStore(std::filesystem::path path, CatalogPolicy policy = {});

  const std::filesystem::path& path() const noexcept { return path_; }

 protected:
  void committed(const Catalog& catalog) override;

 private:
  std::filesystem::path path_;
};

/// Serialized catalog file content.
std::string write_catalog(const Catalog& catalog);
/// Throws ParseError.
Catalog read_catalog(std::string_view document);

/// The three-item example repository: record1 (oai_dc + wibble), record2
/// (oai_dc only) and record3 (deleted).
Catalog fixture_catalog();
/// The item added in the incremental-harvest walkthrough.
StoredItem fixture_record4();

}  // namespace oai::store
