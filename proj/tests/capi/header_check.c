#include <math.h>
#include <string.h>

#include "scramblon/scramblon.h"

int scr_c_header_check(void) {
  scr_model* m = NULL;
  scr_point_result r;
  if (scr_model_create(4, 0.95, 1.0, INFINITY, &m) != SCR_OK) return 1;
  if (scr_point_evaluate(m, 0.5, 0.5, -0.05, 1, &r) != SCR_OK) return 2;
  scr_model_destroy(m);
  if (r.status != SCR_ROW_OK) return 3;
  if (strlen(scr_version()) == 0) return 4;
  return 0;
}
