"""CSV 시계열 입출력 어댑터."""

import logging
from pathlib import Path

import pandas as pd

from core.domain.models.errors import DimensionMismatch, EmptyInput
from core.domain.models.observation import Series
from core.ports.series_port import SeriesPort
from infra.adapters.atomic_file import atomic_write

logger = logging.getLogger(__name__)


class CsvSeriesAdapter(SeriesPort):
    """헤더 `t,x1,...,xd,y` 의 UTF-8 CSV 시계열 어댑터."""

    def read_series(self, file_path: str) -> Series:
        """CSV를 읽어 t 기준 안정 정렬 후 검증된 Series로 만듭니다.

        Raises:
            FileNotFoundError: 파일이 존재하지 않을 경우
            DimensionMismatch: 헤더가 `t,x1..xd,y` 형식이 아닌 경우
        """
        if not Path(file_path).exists():
            raise FileNotFoundError(f"파일을 찾을 수 없습니다: {file_path}")
        try:
            df = pd.read_csv(file_path, encoding="utf-8")
        except pd.errors.EmptyDataError:
            raise EmptyInput(f"빈 파일입니다: {file_path}")

        columns = [str(c).strip() for c in df.columns]
        expected = ["t"] + [f"x{j}" for j in range(1, max(len(columns) - 1, 2))] + ["y"]
        if columns != expected:
            raise DimensionMismatch(f"헤더는 {','.join(expected)} 형식이어야 합니다: {columns}")

        labels = df["t"].tolist()
        values = df.iloc[:, 1:].to_numpy()
        series = Series.from_rows([[labels[i], *values[i]] for i in range(len(labels))])
        logger.info(f"시계열 로드: {file_path} (n={series.n}, d={series.d})")
        return series

    def write_series(self, series: Series, file_path: str) -> None:
        columns = ["t"] + [f"x{j}" for j in range(1, series.d + 1)] + ["y"]
        df = pd.DataFrame(series.to_rows(), columns=columns)
        atomic_write(file_path, lambda tmp: df.to_csv(tmp, index=False, encoding="utf-8", lineterminator="\n"))
