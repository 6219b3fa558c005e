/*
 * griffin: hybrid transactional key-value index.
 *
 * A database handle owns two stores behind one transactional surface: point
 * reads and writes hit an always-current hash table, range reads run over an
 * ordered key index that is synchronized lazily, and a lock protocol makes
 * scans and updates abort each other instead of returning phantoms or stale
 * data. A validating single-store engine is available for comparison.
 *
 * Threading: a griffin_db_t may be shared freely. A griffin_txn_t must be
 * used by one thread at a time. Commit/abort leave the handle valid (and
 * inert) until griffin_txn_destroy.
 *
 * Any failing operation other than GRIFFIN_NOT_FOUND / GRIFFIN_EINVAL
 * finishes the transaction as aborted; the handle then only accepts destroy
 * or a fresh begin through the pool.
 */
#ifndef GRIFFIN_H
#define GRIFFIN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct griffin_db griffin_db_t;
typedef struct griffin_txn griffin_txn_t;

/* Status codes. Negative values are never returned. */
#define GRIFFIN_OK 0
#define GRIFFIN_NOT_FOUND 1          /* point read missed; txn unaffected */
#define GRIFFIN_ABORT_PHANTOM 2      /* txn aborted: range/update overlap */
#define GRIFFIN_ABORT_STALE_READ 3   /* txn aborted: range not yet current */
#define GRIFFIN_ABORT_KEY_EXISTS 4   /* txn aborted: insert of live key */
#define GRIFFIN_ABORT_KEY_NOT_FOUND 5 /* txn aborted: delete of dead key */
#define GRIFFIN_EINVAL 6             /* bad arguments or handle state */
#define GRIFFIN_EFAULT 7             /* misuse the engine had to abort on */
#define GRIFFIN_ECAPACITY 8          /* txn aborted: hash table full */

#define GRIFFIN_ENGINE_GRIFFIN 0
#define GRIFFIN_ENGINE_BASELINE 1

/* txn_begin_flags: serialize flagged txns' writes against each other
 * (writers exclusive, scanners shared). Baseline engine only. */
#define GRIFFIN_TXN_ATOMIC_WRITES 1u

typedef struct griffin_config {
  int engine;                /* GRIFFIN_ENGINE_* */
  uint64_t capacity_slots;   /* hash slots, rounded up to a power of two */
  double max_load_factor;    /* claimed-slot gate, (0.05, 0.95] */
  uint64_t sync_interval_us; /* background synchronization period */
  int sync_autostart;        /* start the background thread on open */
  uint32_t coop_sync_ops;    /* 0 = off; else every Nth finished txn helps */
  int full_predicate_validation; /* baseline: re-validate full scan ranges */
  int debug_disable_scan_update_check;  /* test hook */
  int debug_disable_update_scan_check;  /* test hook */
  int debug_disable_rescan_validation;  /* test hook */
  int profile_ops;           /* collect per-stage op timings */
  uint64_t hash_seed;
} griffin_config_t;

typedef struct griffin_stats {
  uint64_t txns_begun;
  uint64_t txns_committed;
  uint64_t txns_aborted;
  uint64_t aborts_phantom;
  uint64_t aborts_stale_read;
  uint64_t aborts_key_exists;
  uint64_t aborts_key_not_found;
  uint64_t lookups;
  uint64_t lookup_hits;
  uint64_t inserts_ok;
  uint64_t deletes_ok;
  uint64_t scans_ok;
  uint64_t scan_keys_returned;
  uint64_t update_lock_appends;
  uint64_t scan_lock_appends;
  uint64_t update_lock_checks;
  uint64_t scan_lock_checks;
  uint64_t update_lock_nodes_visited;
  uint64_t scan_lock_nodes_visited;
  uint64_t tree_reads;
  uint64_t sync_passes;
  uint64_t sync_applied;
  uint64_t sync_rolled_back;
  uint64_t sync_scan_locks_collected;
  uint64_t rescans;
  uint64_t invariant_violations;
  int64_t update_locks_len;
  int64_t scan_locks_len;
  uint64_t ns_update_log;
  uint64_t ns_point_store;
  uint64_t ns_scan_lock_check;
} griffin_stats_t;

/* Fill *cfg with defaults (griffin engine, 2^22 slots, 0.7 load factor,
 * 1ms sync interval, autostart on). */
int griffin_config_init(griffin_config_t* cfg);

int griffin_open(const griffin_config_t* cfg, griffin_db_t** out);
int griffin_close(griffin_db_t* db);

int griffin_txn_begin(griffin_db_t* db, griffin_txn_t** out);
int griffin_txn_begin_flags(griffin_db_t* db, uint32_t flags,
                            griffin_txn_t** out);
int griffin_commit(griffin_txn_t* txn);
int griffin_abort(griffin_txn_t* txn);
int griffin_txn_destroy(griffin_txn_t* txn);

/* Copies the value into val_buf. If the buffer is too small, returns
 * GRIFFIN_EINVAL with *val_len set to the required size. *val_len is always
 * set on GRIFFIN_OK. */
int griffin_lookup(griffin_txn_t* txn, const char* key, size_t key_len,
                   char* val_buf, size_t val_cap, size_t* val_len);

int griffin_insert(griffin_txn_t* txn, const char* key, size_t key_len,
                   const char* val, size_t val_len);
int griffin_delete(griffin_txn_t* txn, const char* key, size_t key_len);

/* Ordered walk of [begin, end], both bounds inclusive; limit 0 = unbounded.
 * The callback's pointers are valid only during the call. A nonzero return
 * stops the scan early; the scan still succeeds. */
typedef int (*griffin_scan_cb)(void* ctx, const char* key, size_t key_len,
                               const char* val, size_t val_len);
int griffin_scan(griffin_txn_t* txn, const char* begin, size_t begin_len,
                 const char* end, size_t end_len, size_t limit,
                 griffin_scan_cb cb, void* ctx);

/* Lazy-synchronization control. Passes are cheap when there is no backlog. */
int griffin_sync_start(griffin_db_t* db);
int griffin_sync_stop(griffin_db_t* db);
int griffin_sync_pass(griffin_db_t* db);

int griffin_stats(griffin_db_t* db, griffin_stats_t* out);

const char* griffin_strerror(int status);

#ifdef __cplusplus
}
#endif

#endif /* GRIFFIN_H */
