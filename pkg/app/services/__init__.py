from app.services.campaign_service import campaign_service, CampaignService
from app.services.export_service import export_service, ExportService

__all__ = ["campaign_service", "CampaignService", "export_service", "ExportService"]
