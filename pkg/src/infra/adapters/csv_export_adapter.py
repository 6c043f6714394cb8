"""플롯/요약용 CSV 내보내기 어댑터."""

from typing import Sequence

import pandas as pd

from core.ports.export_port import ExportPort
from infra.adapters.atomic_file import atomic_write


class CsvExportAdapter(ExportPort):
    """CSV 내보내기 어댑터."""

    def export_csv(
        self,
        rows: Sequence[Sequence],
        columns: Sequence[str],
        file_path: str
    ) -> None:
        """행 목록을 DataFrame으로 만들어 CSV 파일로 저장."""
        df = pd.DataFrame(list(rows), columns=list(columns))
        atomic_write(file_path, lambda tmp: df.to_csv(tmp, index=False, encoding="utf-8", lineterminator="\n"))
