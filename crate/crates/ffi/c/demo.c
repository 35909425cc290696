/* Deploys a two-layer plan through the C interface and prints a summary.
 * Exits non-zero if any check fails. */
#include <stdio.h>
#include <stdlib.h>

#include "asd.h"

#define CHECK(call)                                                        \
  do {                                                                     \
    enum AsdStatus s_ = (call);                                            \
    if (s_ != ASD_STATUS_OK) {                                             \
      fprintf(stderr, "%s failed (%d): %s\n", #call, (int)s_,              \
              asd_last_error() ? asd_last_error() : "?");                  \
      return 1;                                                            \
    }                                                                      \
  } while (0)

static const char *PLAN =
    "{\"layers\": ["
    "{\"outer_radius\": 1, \"sector_bounds\": [], \"sector_counts\": [100]},"
    "{\"outer_radius\": 2, \"sector_bounds\": [\"pi\"], \"sector_counts\": [300, 50]}"
    "]}";

int main(void) {
  struct AsdDeployment *dep = NULL;
  CHECK(asd_deploy_controlled_json(PLAN, 42, &dep));

  size_t n = asd_deployment_len(dep);
  size_t k = asd_deployment_sector_count(dep);
  const double *xy = asd_deployment_coords(dep);
  if (n != 450 || k != 3 || xy == NULL) {
    fprintf(stderr, "unexpected shape: n=%zu sectors=%zu\n", n, k);
    return 1;
  }
  for (size_t s = 0; s < k; ++s) {
    struct AsdSectorInfo info;
    CHECK(asd_deployment_sector(dep, s, &info));
    printf("layer %u sector %u: %zu points, density %.4f\n", info.layer,
           info.sector, info.count, info.count / info.area);
  }

  struct AsdTag *tags = malloc(n * sizeof *tags);
  size_t written = 0;
  CHECK(asd_deployment_copy_tags(dep, tags, n, &written));
  if (written != n || tags[n - 1].layer != 1 || tags[n - 1].sector != 1) {
    fprintf(stderr, "bad tags\n");
    return 1;
  }
  free(tags);
  printf("first point (%.6f, %.6f), version %s\n", xy[0], xy[1], asd_version());
  asd_deployment_free(dep);

  if (asd_deploy_controlled_json("{\"layers\": []}", 1, &dep) !=
      ASD_STATUS_INVALID_PLAN) {
    fprintf(stderr, "empty plan accepted\n");
    return 1;
  }
  printf("rejected: %s\n", asd_last_error());
  return 0;
}
